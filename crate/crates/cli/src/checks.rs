//! Invariant checks on single instances, shared by `selftest` and the acceptance run.

use std::sync::Arc;

use rand::Rng;
use weightforge::derived::{cone_triangle, hom_derived, hom_derived_dim, hom_dim_formal, DerivedMorphism, DerivedObject};
use weightforge::linalg::Rat;
use weightforge::quiver::{Rep, WeightedQuiver};
use weightforge::random::{random_complex, random_quiver, random_rep, random_rep_map, QuiverShape};
use weightforge::spectral::{
    build_perturbed_tower, gr_heart, heart_filtration_from_degeneration, k0_check_triangle, run_ss,
    run_ss_on_tower, strictness_check, HomFunctor,
};
use weightforge::weight::{
    a_adjoint, b_adjoint, check_transversality, in_c_le, membership_w, nice_decompose,
    weight_decompose, weight_range, CheckBudget, Mode, Side,
};

pub type Check = Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn engine<T>(r: weightforge::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Random sizes used by the drivers.
#[derive(Clone, Copy, Debug)]
pub struct Scale {
    pub max_vertices: usize,
    pub max_len: usize,
    pub max_dim: usize,
}

impl Default for Scale {
    fn default() -> Self {
        Scale {
            max_vertices: 6,
            max_len: 4,
            max_dim: 3,
        }
    }
}

pub fn admissible_quiver<R: Rng>(rng: &mut R, scale: Scale) -> Arc<WeightedQuiver> {
    random_quiver(
        rng,
        QuiverShape {
            max_vertices: scale.max_vertices,
            ..QuiverShape::default()
        },
    )
}

pub fn object<R: Rng>(rng: &mut R, q: &Arc<WeightedQuiver>, scale: Scale) -> DerivedObject {
    DerivedObject::new(random_complex(rng, q, scale.max_len, scale.max_dim))
}

pub fn module<R: Rng>(rng: &mut R, q: &Arc<WeightedQuiver>, scale: Scale) -> Rep {
    random_rep(rng, q, scale.max_dim)
}

/// A random element of `Hom(X, Y)`, Ext components included.
pub fn morphism<R: Rng>(rng: &mut R, x: &DerivedObject, y: &DerivedObject) -> DerivedMorphism {
    hom_derived(x, y, 0)
        .basis
        .iter()
        .fold(DerivedMorphism::zero(x, y), |acc, b| {
            acc.add(&b.scale(&Rat::from_int(rng.gen_range(-2..=2))))
        })
}

/// A level near the weight range of `x`.
pub fn level<R: Rng>(rng: &mut R, x: &DerivedObject, mode: Mode) -> i32 {
    match weight_range(x.complex(), mode) {
        Ok(Some(r)) => rng.gen_range(r.lo - 1..=r.hi + 1),
        _ => 0,
    }
}

/// Pieces in the right classes, an exact triangle, and `Hom(w≤i X, w≥i+1 Y) = 0`.
pub fn weight_decomposition(x: &DerivedObject, y: &DerivedObject, i: i32, mode: Mode) -> Check {
    let tx = engine(weight_decompose(x, i, mode))?;
    let ty = engine(weight_decompose(y, i, mode))?;
    ensure(engine(membership_w(tx.a.complex(), i, Side::Le, mode))?, || format!("w≤{i} piece misplaced"))?;
    ensure(engine(membership_w(tx.c.complex(), i + 1, Side::Ge, mode))?, || format!("w≥{} piece misplaced", i + 1))?;
    ensure(tx.is_exact_on_cohomology(), || "triangle not exact".into())?;
    ensure(hom_derived_dim(&tx.a, &ty.c, 0) == 0, || "orthogonality fails".into())
}

/// `W_{≤i}M → M → M/W_{≤i}M` lies in the heart and is short exact.
pub fn nice_decomposition(m: &Rep, i: i32) -> Check {
    let t = engine(nice_decompose(m, i))?;
    for o in [&t.a, &t.b, &t.c] {
        let r = o.complex().cohomology_range();
        ensure(r.is_none() || r == Some((0, 0)), || "object outside the heart".into())?;
    }
    ensure(t.is_exact_on_cohomology(), || "columns not exact".into())?;
    let (hu, hv) = (t.u.cohomology(0), t.v.cohomology(0));
    ensure(
        hu.iter().zip(&hv).all(|(u, v)| u.rank() == u.cols() && v.rank() == v.rows()),
        || "not a short exact sequence".into(),
    )
}

/// Convergence, the derived-couple oracle and the filtration match for every functor tag.
pub fn spectral(x: &DerivedObject, mode: Mode) -> Check {
    let nv = x.quiver().vertex_count();
    let tags = [HomFunctor::THomology, HomFunctor::TotalDim]
        .into_iter()
        .chain((0..nv).map(HomFunctor::DimAtVertex));
    for h in tags {
        let ss = engine(run_ss(h, x, mode))?;
        ensure(ss.converges, || format!("{h:?}: E_inf does not add up to H"))?;
        ensure(ss.oracle_agrees, || format!("{h:?}: pages disagree with the oracle"))?;
        ensure(ss.e_inf_matches_filtration, || format!("{h:?}: E_inf is not the graded filtration"))?;
    }
    Ok(())
}

pub fn degenerates(x: &DerivedObject, mode: Mode) -> Check {
    let ss = engine(run_ss(HomFunctor::THomology, x, mode))?;
    ensure(ss.degenerates_at_e2, || format!("stable only at E_{}", ss.stable_page))
}

/// The filtration on cohomology from a perturbed tower equals the canonical one.
pub fn choice_independence<R: Rng>(x: &DerivedObject, mode: Mode, rng: &mut R) -> Check {
    let canon = engine(run_ss(HomFunctor::THomology, x, mode))?;
    let tower = engine(build_perturbed_tower(x, mode, rng))?;
    let other = engine(run_ss_on_tower(HomFunctor::THomology, &tower))?;
    ensure(other.converges && other.oracle_agrees, || "perturbed sequence is inconsistent".into())?;
    ensure(canon.filtration == other.filtration, || "filtrations differ".into())
}

pub fn strictness(f: &DerivedMorphism, n: i32, i: i32, mode: Mode) -> Check {
    ensure(engine(strictness_check(f, n, i, mode))?, || format!("not strict at n={n}, i={i}"))
}

pub fn k0_triangle(f: &DerivedMorphism) -> Check {
    ensure(k0_check_triangle(&cone_triangle(f)), || "[B] ≠ [A] + [C]".into())
}

/// Filtration read off the spectral sequence equals vertex support; `Gr ≅ Gr′` at every weight.
pub fn heart_filtration(m: &Rep, n: &Rep, rng: &mut impl Rng) -> Check {
    let fm = engine(heart_filtration_from_degeneration(m, Mode::Transversal))?;
    ensure(fm.is_increasing() && fm.is_separated() && fm.is_exhaustive(), || "not a filtration".into())?;
    ensure(engine(fm.agrees_with_module())?, || "differs from the support filtration".into())?;
    let fnn = engine(heart_filtration_from_degeneration(n, Mode::Transversal))?;
    let f = random_rep_map(rng, m, n);
    ensure(fm.is_compatible(&f, &fnn), || "a morphism leaves the filtration".into())?;
    gr_pieces(m)
}

pub fn gr_pieces(m: &Rep) -> Check {
    let Some((lo, hi)) = m.quiver().weight_range() else {
        return Ok(());
    };
    for i in lo - 1..=hi + 1 {
        let g = engine(gr_heart(m, i, Mode::Transversal))?;
        ensure(g.is_iso, || format!("Gr_{i} and Gr'_{i} differ"))?;
        ensure(g.criterion_holds, || format!("membership criterion fails at {i}"))?;
    }
    Ok(())
}

pub fn hom_cross_oracle(x: &DerivedObject, y: &DerivedObject, n: i32) -> Check {
    let a = hom_derived_dim(x, y, n);
    let b = hom_dim_formal(x.complex(), y.complex(), n);
    ensure(a == b, || format!("chain maps give {a}, cohomology gives {b}"))
}

/// `Hom(Y, b_i X) ≅ Hom(Y, X)` for `Y ∈ 𝒞_{≤i}`, and `a_{i,j} Y = 0` iff `Y ∈ 𝒞_{≤j}`.
pub fn adjunctions(x: &DerivedObject, z: &DerivedObject, i: i32, j: i32) -> Check {
    let y = engine(b_adjoint(z, i))?.object;
    ensure(in_c_le(y.complex(), i), || "b_i lands outside C≤i".into())?;
    let bx = engine(b_adjoint(x, i))?.object;
    for n in -1..=1 {
        let (l, r) = (hom_derived_dim(&y, &bx, n), hom_derived_dim(&y, x, n));
        ensure(l == r, || format!("Hom(Y, b_i X[{n}]) = {l} but Hom(Y, X[{n}]) = {r}"))?;
    }
    let a = engine(a_adjoint(&y, i, j))?;
    ensure(a.object.is_zero() == in_c_le(y.complex(), j), || format!("a_{{{i},{j}}} kills the wrong objects"))
}

/// The verdict is unchanged on the opposite quiver with negated weights.
pub fn duality(q: &Arc<WeightedQuiver>, budget: CheckBudget) -> Check {
    let a = check_transversality(q, budget);
    let b = check_transversality(&q.opposite().into_arc(), budget);
    ensure(a.overall == b.overall, || format!("verdicts {} and {}", a.overall, b.overall))
}
