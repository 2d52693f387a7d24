use serde::Serialize;

use super::{run_ss, HomFunctor};
use crate::derived::{proj_replace, Complex, DerivedMorphism, DerivedObject};
use crate::error::{Error, Result};
use crate::linalg::{solve_many, RatMatrix, Subspace};
use crate::quiver::{gr_module, w_le_module, Rep, RepMap};
use crate::weight::{weight_decompose, Mode};

/// `0 = W_{≤lo−1}M ⊂ W_{≤lo}M ⊂ … ⊂ W_{≤hi}M = M`, read off the weight spectral sequence.
#[derive(Clone, Debug)]
pub struct HeartFiltration {
    pub object: Rep,
    pub mode: Mode,
    pub lo: i32,
    /// `steps[k − lo + 1]`, each the subspace family of `W_{≤k}M`.
    pub steps: Vec<Vec<Subspace>>,
}

impl HeartFiltration {
    pub fn hi(&self) -> i32 {
        self.lo + self.steps.len() as i32 - 2
    }

    /// `W_{≤k}M` at every vertex, for any `k`.
    pub fn step(&self, k: i32) -> &[Subspace] {
        let idx = (k - self.lo + 1).clamp(0, self.steps.len() as i32 - 1);
        &self.steps[idx as usize]
    }

    pub fn subobject(&self, k: i32) -> Result<(Rep, RepMap)> {
        let bases: Vec<RatMatrix> = self.step(k).iter().map(|s| s.basis().clone()).collect();
        self.object.subrep(&bases)
    }

    pub fn is_increasing(&self) -> bool {
        self.steps
            .windows(2)
            .all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| a.is_subspace_of(b)))
    }

    pub fn is_separated(&self) -> bool {
        self.steps[0].iter().all(|s| s.dim() == 0)
    }

    pub fn is_exhaustive(&self) -> bool {
        let top = self.steps.last().expect("nonempty");
        top.iter()
            .zip(self.object.dims())
            .all(|(s, &d)| s.dim() == d)
    }

    /// Every step is a subrepresentation.
    pub fn steps_are_subobjects(&self) -> bool {
        (self.lo - 1..=self.hi()).all(|k| self.subobject(k).is_ok())
    }

    /// `f(W_{≤k}M) ⊂ W_{≤k}N` for all `k`.
    pub fn is_compatible(&self, f: &RepMap, target: &HeartFiltration) -> bool {
        let lo = self.lo.min(target.lo) - 1;
        let hi = self.hi().max(target.hi());
        (lo..=hi).all(|k| {
            self.step(k)
                .iter()
                .zip(target.step(k))
                .enumerate()
                .all(|(v, (a, b))| a.map(f.component(v)).is_subspace_of(b))
        })
    }

    /// Equality with the vertex-support filtration, step by step.
    pub fn agrees_with_module(&self) -> Result<bool> {
        for k in self.lo - 1..=self.hi() {
            let (_, incl) = w_le_module(&self.object, k)?;
            let same = self
                .step(k)
                .iter()
                .zip(incl.components())
                .all(|(s, c)| *s == Subspace::span(c));
            if !same {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `W_{≤k}M := Im(H^0(w≤k M) → M)` once the spectral sequence of `M` is known to degenerate.
///
/// In stupid mode `M` is replaced by a projective resolution first.
pub fn heart_filtration_from_degeneration(m: &Rep, mode: Mode) -> Result<HeartFiltration> {
    let x = DerivedObject::new(Complex::concentrated(m, 0));
    let hx = x.cohomology(0);
    let nv = m.quiver().vertex_count();
    // Per vertex: H^0 of the filtered object into `M` coordinates.
    let (object, to_m): (DerivedObject, Vec<RatMatrix>) = match mode {
        Mode::Transversal => (x.clone(), hx.section.clone()),
        Mode::StupidOnProj => {
            let r = proj_replace(x.complex());
            let y = DerivedObject::new(r.proj.complex().clone());
            let eps = DerivedMorphism::from_chain_map(&y, &x, &r.eps_chain);
            let e0 = eps.cohomology(0);
            (y, (0..nv).map(|v| &hx.section[v] * &e0[v]).collect())
        }
    };
    let ss = run_ss(HomFunctor::THomology, &object, mode)?;
    if !ss.degenerates_at_e2 {
        return Err(Error::NotDegenerate(format!(
            "stable only at E_{}",
            ss.stable_page
        )));
    }
    let (lo, hi) = ss.levels;
    let (lo, hi) = if lo > hi { (0, -1) } else { (lo, hi) };
    let steps = (lo - 1..=hi)
        .map(|k| match ss.filtration_step(0, k) {
            Some(s) => s.iter().zip(&to_m).map(|(s, t)| s.map(t)).collect(),
            None => m.dims().iter().map(|&d| Subspace::zero(d)).collect(),
        })
        .collect();
    Ok(HeartFiltration {
        object: m.clone(),
        mode,
        lo,
        steps,
    })
}

/// `h` with `g ∘ h = f`, for `g` injective and `im f ⊂ im g`.
fn factor_mono(f: &RepMap, g: &RepMap) -> Result<RepMap> {
    let comps = f
        .components()
        .iter()
        .zip(g.components())
        .map(|(fv, gv)| {
            solve_many(gv, fv)?.ok_or_else(|| Error::Membership("image does not factor".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    RepMap::new(f.source().clone(), g.source().clone(), comps)
}

/// `h'` with `h' ∘ p = h`, for `p` surjective and `h` vanishing on `ker p`.
fn descend(h: &RepMap, p: &RepMap) -> Result<RepMap> {
    let comps = h
        .components()
        .iter()
        .zip(p.components())
        .map(|(hv, pv)| {
            let s = solve_many(pv, &RatMatrix::identity(pv.rows()))?
                .ok_or_else(|| Error::Shape("projection is not surjective".into()))?;
            Ok(hv * &s)
        })
        .collect::<Result<Vec<_>>>()?;
    RepMap::new(p.target().clone(), h.target().clone(), comps)
}

/// `Gr_i M = W_{≤i}M / W_{≤i−1}M` against `Gr′_i M = W_{≤i}(M / W_{≤i−1}M)`.
#[derive(Clone, Debug, Serialize)]
pub struct GrWitness {
    pub weight: i32,
    #[serde(skip)]
    pub gr: Rep,
    #[serde(skip)]
    pub gr_dual: Rep,
    /// `Gr_i M → Gr′_i M` induced by `W_{≤i}M → M → M / W_{≤i−1}M`.
    #[serde(skip)]
    pub iso: RepMap,
    pub dims: Vec<usize>,
    pub is_iso: bool,
    /// `M ∈ W_{≤i}` exactly when `Gr_j M = 0` for all `j > i`.
    pub criterion_holds: bool,
}

pub fn gr_heart(m: &Rep, i: i32, mode: Mode) -> Result<GrWitness> {
    if mode != Mode::Transversal {
        return Err(Error::WrongMode("Gr needs the transversal structure".into()));
    }
    let (_, ia) = w_le_module(m, i)?;
    let (_, ib) = w_le_module(m, i - 1)?;
    let (gr, pg) = factor_mono(&ib, &ia)?.cokernel();
    let (q, pq) = ib.cokernel();
    let (gr_dual, i2) = w_le_module(&q, i)?;
    let k = factor_mono(&pq.compose(&ia), &i2)?;
    let iso = descend(&k, &pg)?;

    let q_hi = m.quiver().weight_range().map_or(i, |(_, h)| h);
    let mut tail_zero = true;
    for j in i + 1..=q_hi {
        tail_zero &= gr_module(m, j)?.is_zero();
    }
    Ok(GrWitness {
        weight: i,
        dims: gr.dims().to_vec(),
        is_iso: iso.is_iso(),
        criterion_holds: ia.is_iso() == tail_zero,
        gr,
        gr_dual,
        iso,
    })
}

/// Whether `H^0(w≤i M) → M` is onto, after checking degeneration for `M`.
pub fn epimorphism_criterion(m: &Rep, i: i32, mode: Mode) -> Result<bool> {
    if mode != Mode::Transversal {
        return Err(Error::WrongMode("heart objects are representations".into()));
    }
    let x = DerivedObject::new(Complex::concentrated(m, 0));
    if !run_ss(HomFunctor::THomology, &x, mode)?.degenerates_at_e2 {
        return Err(Error::NotDegenerate("heart object".into()));
    }
    let t = weight_decompose(&x, i, mode)?;
    Ok(t.u.cohomology(0).iter().all(|h| h.rank() == h.rows()))
}
