use rand::Rng;

use super::{in_c_le, membership_w, require_admissible, require_projective, Mode, Side};
use crate::derived::{
    cone_triangle, direct_sum, formality_split, hom_derived, triangle_from_exact_pair, ChainMap,
    Complex, DerivedMorphism, DerivedObject, Formality, HomSpace, Triangle,
};
use crate::error::{Error, Result};
use crate::linalg::{solve, Rat, RatMatrix};
use crate::quiver::{projective, simple, w_le_module, Rep, RepMap};

/// Sub and quotient of the formal model, cut degreewise by a module filtration.
struct FormalCut {
    fm: Formality,
    sub: DerivedObject,
    incl: ChainMap,
    quot: DerivedObject,
    proj: ChainMap,
}

/// Degreewise chain map between complexes with zero differentials.
fn degreewise(src: &Complex, tgt: &Complex, maps: &[(i32, RepMap)]) -> ChainMap {
    let comps = src
        .degrees()
        .map(|n| match maps.iter().find(|(m, _)| *m == n) {
            Some((_, f)) => {
                RepMap::new_unchecked(src.term(n), tgt.term(n), f.components().to_vec())
            }
            None => RepMap::zero(&src.term(n), &tgt.term(n)),
        })
        .collect();
    ChainMap::new_unchecked(src.clone(), tgt.clone(), comps)
}

fn cut_formal(x: &DerivedObject, level: impl Fn(i32) -> i32) -> Result<FormalCut> {
    let q = x.quiver().clone();
    let fm = formality_split(x);
    let f = fm.formal.complex().clone();
    let mut subs = Vec::new();
    let mut quots = Vec::new();
    let mut incls = Vec::new();
    let mut projs = Vec::new();
    for (n, h) in &fm.pieces {
        let (w, inc) = w_le_module(h, level(*n))?;
        let (c, pr) = inc.cokernel();
        subs.push((*n, w));
        quots.push((*n, c));
        incls.push((*n, inc));
        projs.push((*n, pr));
    }
    let sub = Complex::formal(q.clone(), &subs);
    let quot = Complex::formal(q, &quots);
    let incl = degreewise(&sub, &f, &incls);
    let proj = degreewise(&f, &quot, &projs);
    Ok(FormalCut {
        fm,
        sub: DerivedObject::new(sub),
        incl,
        quot: DerivedObject::new(quot),
        proj,
    })
}

/// `w≤i X → X → w≥i+1 X → (w≤i X)[1]`.
///
/// Transversal: `⊕_j (W_{≤i+j} H^j X)[−j]` carried to `X` through the formal model.
/// StupidOnProj: the stupid filtration keeping degrees `≥ −i`.
pub fn weight_decompose(x: &DerivedObject, i: i32, mode: Mode) -> Result<Triangle> {
    match mode {
        Mode::Transversal => {
            require_admissible(x.complex())?;
            let cut = cut_formal(x, |n| i + n)?;
            let t = triangle_from_exact_pair(&cut.incl, &cut.proj);
            Ok(t.transport(&cut.fm.to_x, &cut.fm.from_x))
        }
        Mode::StupidOnProj => {
            let c = x.complex();
            require_projective(c)?;
            let (_, incl) = c.stupid_ge(-i);
            let (_, proj) = stupid_lt(c, -i);
            Ok(triangle_from_exact_pair(&incl, &proj))
        }
    }
}

/// The quotient complex of terms in degrees `< n`.
fn stupid_lt(x: &Complex, n: i32) -> (Complex, ChainMap) {
    let q = x.quiver().clone();
    let hi = (n - 1).min(x.hi());
    let terms: Vec<Rep> = (x.lo()..=hi).map(|k| x.term(k)).collect();
    let diffs: Vec<RepMap> = (x.lo()..hi).map(|k| x.diff(k)).collect();
    let quot = if terms.is_empty() {
        Complex::zero(q)
    } else {
        Complex::new(q, x.lo(), terms, diffs).expect("subcomplex of a complex")
    };
    let comps = x
        .degrees()
        .map(|k| {
            if k < n {
                RepMap::identity(&x.term(k))
            } else {
                RepMap::zero(&x.term(k), &quot.term(k))
            }
        })
        .collect();
    (quot.clone(), ChainMap::new_unchecked(x.clone(), quot, comps))
}

/// An object of `w = i` built from one simple (or projective) at vertex `v`.
pub(crate) fn pure_object(q: &std::sync::Arc<crate::quiver::WeightedQuiver>, v: usize, i: i32, mode: Mode) -> Complex {
    match mode {
        Mode::Transversal => Complex::concentrated(&simple(q, v), q.weight(v) - i),
        Mode::StupidOnProj => Complex::concentrated(&projective(q, v), -i),
    }
}

fn random_combination<R: Rng>(basis: &[DerivedMorphism], zero: DerivedMorphism, rng: &mut R) -> DerivedMorphism {
    basis.iter().fold(zero, |acc, b| {
        let c = Rat::from_int(rng.gen_range(-2..=2));
        acc.add(&b.scale(&c))
    })
}

/// Another weight decomposition at `i`: `w≤i X ⊕ Y → X` for a pure `Y` of weight `i`
/// and a random map `Y → X`, completed by its cone.
pub fn perturbed_weight_decompose<R: Rng>(
    x: &DerivedObject,
    i: i32,
    mode: Mode,
    rng: &mut R,
) -> Result<Triangle> {
    let t = weight_decompose(x, i, mode)?;
    let q = x.quiver().clone();
    let v = rng.gen_range(0..q.vertex_count());
    let y = DerivedObject::new(pure_object(&q, v, i, mode));
    let g = random_combination(&hom_derived(&y, x, 0).basis, DerivedMorphism::zero(&y, x), rng);
    let (sum, _, projs) = direct_sum(q, &[t.a.complex().clone(), y.complex().clone()]);
    let a2 = DerivedObject::new(sum);
    let pa = DerivedMorphism::from_chain_map(&a2, &t.a, &projs[0]);
    let py = DerivedMorphism::from_chain_map(&a2, &y, &projs[1]);
    let u2 = t.u.compose(&pa).add(&g.compose(&py));
    let u2 = DerivedMorphism::from_images(a2, x.clone(), u2.images().clone());
    Ok(cone_triangle(&u2))
}

/// `W_{≤i}M → M → M / W_{≤i}M`, all three in the heart of the t-structure.
pub fn nice_decompose(m: &Rep, i: i32) -> Result<Triangle> {
    let (w, inc) = w_le_module(m, i)?;
    let (c, pr) = inc.cokernel();
    let (a, b, cc) = (
        Complex::concentrated(&w, 0),
        Complex::concentrated(m, 0),
        Complex::concentrated(&c, 0),
    );
    let u = degreewise(&a, &b, &[(0, inc)]);
    let v = degreewise(&b, &cc, &[(0, pr)]);
    Ok(triangle_from_exact_pair(&u, &v))
}

#[derive(Clone, Debug)]
pub struct ImageCheck {
    pub holds: bool,
    /// `Im(H^0(w≤i X) → H^0 X)` in the cohomology basis of `X`.
    pub image: Rep,
    pub matches_filtration: bool,
}

/// For a randomized choice of `w≤i X`, whether `Im(H^0(w≤i X) → X)` yields a nice decomposition.
pub fn image_condition_check<R: Rng>(x: &DerivedObject, i: i32, rng: &mut R) -> Result<ImageCheck> {
    require_admissible(x.complex())?;
    let h0 = x.cohomology(0);
    if let Some((lo, hi)) = x.complex().cohomology_range() {
        if lo != 0 || hi != 0 {
            return Err(Error::Membership("object is not in the heart of t".into()));
        }
    }
    let t = perturbed_weight_decompose(x, i, Mode::Transversal, rng)?;
    let comps = t.u.cohomology(0);
    let ha = t.a.cohomology(0);
    let map = RepMap::new(ha.rep.clone(), h0.rep.clone(), comps)?;
    let (image, _) = map.image();
    let (w, _) = w_le_module(&h0.rep, i)?;
    let matches_filtration = map
        .image_subspaces()
        .iter()
        .enumerate()
        .all(|(v, s)| s.dim() == if x.quiver().weight(v) <= i { h0.rep.dim(v) } else { 0 })
        && image.dims() == w.dims();
    let quotient = map.cokernel().0;
    let holds = membership_w(&Complex::concentrated(&image, 0), i, Side::Le, Mode::Transversal)?
        && membership_w(&Complex::concentrated(&quotient, 0), i + 1, Side::Ge, Mode::Transversal)?;
    Ok(ImageCheck {
        holds,
        image,
        matches_filtration,
    })
}

/// The pieces `τ_{=i} X ∈ 𝒜_i[−i]` of an object of `w = 0`, with the witnessing isomorphism.
#[derive(Clone, Debug)]
pub struct HeartSplit {
    pub pieces: Vec<(i32, Rep)>,
    pub formality: Formality,
}

pub fn split_hw_object(x: &DerivedObject) -> Result<HeartSplit> {
    let c = x.complex();
    if !membership_w(c, 0, Side::Le, Mode::Transversal)?
        || !membership_w(c, 0, Side::Ge, Mode::Transversal)?
    {
        return Err(Error::Membership("object is not in the heart of w".into()));
    }
    let formality = formality_split(x);
    Ok(HeartSplit {
        pieces: formality.pieces.clone(),
        formality,
    })
}

/// An object with its structure map: the counit `b_i X → X`, or the unit `X → a_{i,j} X`.
#[derive(Clone, Debug)]
pub struct Adjoint {
    pub object: DerivedObject,
    pub map: DerivedMorphism,
}

/// `b_i X = ⊕_j (W_{≤i} H^j X)[−j]`, right adjoint to `𝒞_{≤i} ⊂ 𝒞`.
pub fn b_adjoint(x: &DerivedObject, i: i32) -> Result<Adjoint> {
    require_admissible(x.complex())?;
    let cut = cut_formal(x, |_| i)?;
    let incl = DerivedMorphism::from_chain_map(&cut.sub, &cut.fm.formal, &cut.incl);
    Ok(Adjoint {
        map: cut.fm.to_x.compose(&incl),
        object: cut.sub,
    })
}

/// `a_{i,j} X = ⊕_k (H^k X / W_{≤j} H^k X)[−k]` for `X ∈ 𝒞_{≤i}`, `j < i`.
pub fn a_adjoint(x: &DerivedObject, i: i32, j: i32) -> Result<Adjoint> {
    require_admissible(x.complex())?;
    if j >= i {
        return Err(Error::Shape(format!("a_{{{i},{j}}} needs j < i")));
    }
    if !in_c_le(x.complex(), i) {
        return Err(Error::Membership(format!("object is not in C_<={i}")));
    }
    let cut = cut_formal(x, |_| j)?;
    let proj = DerivedMorphism::from_chain_map(&cut.fm.formal, &cut.quot, &cut.proj);
    Ok(Adjoint {
        map: proj.compose(&cut.fm.from_x),
        object: cut.quot,
    })
}

/// `h`, `k` completing `g` to a morphism between two weight decompositions.
#[derive(Clone, Debug)]
pub struct TriangleMorphism {
    pub source: Triangle,
    pub target: Triangle,
    pub h: DerivedMorphism,
    pub k: DerivedMorphism,
}

impl TriangleMorphism {
    /// All three squares commute up to homotopy.
    pub fn commutes(&self, g: &DerivedMorphism) -> bool {
        let (s, t) = (&self.source, &self.target);
        t.u.compose(&self.h).homotopic(&g.compose(&s.u))
            && t.v.compose(g).homotopic(&self.k.compose(&s.v))
            && t.w.compose(&self.k).homotopic(&self.h.shift(1).compose(&s.w))
    }
}

fn coords(space: &HomSpace, f: &DerivedMorphism) -> Vec<Rat> {
    space.class_coords(f.images())
}

pub fn extend_to_decompositions(
    g: &DerivedMorphism,
    i: i32,
    mode: Mode,
) -> Result<TriangleMorphism> {
    let s = weight_decompose(g.source(), i, mode)?;
    let t = weight_decompose(g.target(), i, mode)?;

    let hbasis = hom_derived(&s.a, &t.a, 0).basis;
    let sp = HomSpace::new(&s.a.replacement().proj, t.b.complex());
    let cols: Vec<Vec<Rat>> = hbasis.iter().map(|b| coords(&sp, &t.u.compose(b))).collect();
    let rhs = coords(&sp, &g.compose(&s.u));
    let c = solve(&RatMatrix::from_columns(rhs.len(), &cols), &rhs)?
        .ok_or_else(|| Error::Membership("no h completes the left square".into()))?;
    let h = combine(&hbasis, &c, DerivedMorphism::zero(&s.a, &t.a));

    let kbasis = hom_derived(&s.c, &t.c, 0).basis;
    let sp1 = HomSpace::new(&s.b.replacement().proj, t.c.complex());
    let sp2 = HomSpace::new(&s.c.replacement().proj, t.w.target().complex());
    let cols: Vec<Vec<Rat>> = kbasis
        .iter()
        .map(|k| {
            let mut v = coords(&sp1, &k.compose(&s.v));
            v.extend(coords(&sp2, &t.w.compose(k)));
            v
        })
        .collect();
    let mut rhs = coords(&sp1, &t.v.compose(g));
    rhs.extend(coords(&sp2, &h.shift(1).compose(&s.w)));
    let c = solve(&RatMatrix::from_columns(rhs.len(), &cols), &rhs)?
        .ok_or_else(|| Error::Membership("no k completes the triangle morphism".into()))?;
    let k = combine(&kbasis, &c, DerivedMorphism::zero(&s.c, &t.c));
    Ok(TriangleMorphism {
        source: s,
        target: t,
        h,
        k,
    })
}

fn combine(basis: &[DerivedMorphism], c: &[Rat], zero: DerivedMorphism) -> DerivedMorphism {
    basis
        .iter()
        .zip(c)
        .fold(zero, |acc, (b, x)| acc.add(&b.scale(x)))
}
