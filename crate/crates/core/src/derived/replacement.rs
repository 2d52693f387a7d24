use std::collections::HashMap;
use std::sync::Arc;

use super::{ChainMap, Complex};
use crate::linalg::{kernel_basis, solve_many, Rat, RatMatrix};
use crate::quiver::{projective_cover, FreeRep, Rep, RepMap, WeightedQuiver};

/// Images of the generators of a projective complex: `images[m − lo][g]` lies in `Y^m_{x_g}`.
///
/// A chain map out of a complex of free representations is determined by these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenImages {
    pub lo: i32,
    pub images: Vec<Vec<Vec<Rat>>>,
}

impl GenImages {
    pub fn get(&self, m: i32) -> &[Vec<Rat>] {
        let k = m - self.lo;
        if k < 0 || k as usize >= self.images.len() {
            &[]
        } else {
            &self.images[k as usize]
        }
    }

    pub fn map(&self, mut f: impl FnMut(i32, usize, &[Rat]) -> Vec<Rat>) -> GenImages {
        GenImages {
            lo: self.lo,
            images: self
                .images
                .iter()
                .enumerate()
                .map(|(k, gs)| {
                    gs.iter()
                        .enumerate()
                        .map(|(g, v)| f(self.lo + k as i32, g, v))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn zip(&self, other: &GenImages, f: impl Fn(&Rat, &Rat) -> Rat) -> GenImages {
        self.map(|m, g, v| {
            let w = &other.get(m)[g];
            v.iter().zip(w).map(|(a, b)| f(a, b)).collect()
        })
    }

    pub fn flatten(&self) -> Vec<Rat> {
        self.images.iter().flatten().flatten().cloned().collect()
    }
}

/// A bounded complex whose terms are free representations with explicit generators.
#[derive(Clone, Debug)]
pub struct ProjComplex {
    complex: Complex,
    frees: Vec<FreeRep>,
    /// `d(g)` for every generator, in the free basis of the next term.
    dgen: Vec<Vec<Vec<Rat>>>,
}

impl ProjComplex {
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn quiver(&self) -> &Arc<WeightedQuiver> {
        self.complex.quiver()
    }

    pub fn lo(&self) -> i32 {
        self.complex.lo()
    }

    pub fn hi(&self) -> i32 {
        self.complex.hi()
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.complex.degrees()
    }

    pub fn free(&self, m: i32) -> Option<&FreeRep> {
        let k = m - self.lo();
        if self.complex.is_zero() || k < 0 || k as usize >= self.frees.len() {
            None
        } else {
            Some(&self.frees[k as usize])
        }
    }

    pub fn gens(&self, m: i32) -> &[usize] {
        self.free(m).map_or(&[], FreeRep::gens)
    }

    pub fn gen_count(&self) -> usize {
        self.frees.iter().map(FreeRep::gen_count).sum()
    }

    pub fn dgen(&self, m: i32, g: usize) -> &[Rat] {
        &self.dgen[(m - self.lo()) as usize][g]
    }

    /// `d(g)` expanded as `(g', p, c)`: `c` times the path `p` applied to generator `g'` of degree `m + 1`.
    pub fn expand_dgen(&self, m: i32, g: usize) -> Vec<(usize, usize, Rat)> {
        match self.free(m + 1) {
            None => Vec::new(),
            Some(next) => {
                let x = self.gens(m)[g];
                next.expand(x, self.dgen(m, g))
            }
        }
    }

    /// The chain map determined by generator images in `y`.
    pub fn chain_map(&self, y: &Complex, images: &GenImages) -> ChainMap {
        let comps = self
            .degrees()
            .map(|m| {
                self.free(m)
                    .expect("in range")
                    .map_to(&y.term(m), images.get(m))
            })
            .collect();
        ChainMap::new_unchecked(self.complex.clone(), y.clone(), comps)
    }

    /// Generator images of a chain map out of this complex.
    pub fn images_of(&self, f: &ChainMap) -> GenImages {
        GenImages {
            lo: self.lo(),
            images: self
                .degrees()
                .map(|m| self.free(m).expect("in range").images_of(&f.component(m)))
                .collect(),
        }
    }

    pub fn zero_images(&self, y: &Complex) -> GenImages {
        GenImages {
            lo: self.lo(),
            images: self
                .degrees()
                .map(|m| {
                    let t = y.term(m);
                    self.gens(m)
                        .iter()
                        .map(|&x| vec![Rat::zero(); t.dim(x)])
                        .collect()
                })
                .collect(),
        }
    }

    /// A chain map `F: P → b` with `q ∘ F = f`, for `q: b → y` a surjective quasi-isomorphism.
    ///
    /// Built generator by generator from the top degree down; each step solves
    /// `[q; d] F(g) = [f(g); F(d g)]`, which is consistent because `ker q` is acyclic.
    pub fn lift(&self, f: &GenImages, b: &Complex, q: &ChainMap) -> GenImages {
        let quiver = self.quiver().clone();
        let mut out: Vec<Vec<Vec<Rat>>> = vec![Vec::new(); self.frees.len()];
        let mut path_cache: HashMap<(i32, usize), RatMatrix> = HashMap::new();
        for m in self.degrees().rev() {
            let k = (m - self.lo()) as usize;
            let gens = self.gens(m).to_vec();
            let mut sol: Vec<Vec<Rat>> = vec![Vec::new(); gens.len()];
            let bm = b.term(m);
            let bnext = b.term(m + 1);
            for x in 0..quiver.vertex_count() {
                let here: Vec<usize> = (0..gens.len()).filter(|&g| gens[g] == x).collect();
                if here.is_empty() {
                    continue;
                }
                let qx = q.component(m).component(x).clone();
                let dx = b.diff_component(m, x);
                let sys = qx.vstack(&dx);
                let mut rhs = RatMatrix::zeros(sys.rows(), here.len());
                for (col, &g) in here.iter().enumerate() {
                    for (r, v) in f.get(m)[g].iter().enumerate() {
                        rhs[(r, col)] = v.clone();
                    }
                    let mut acc = vec![Rat::zero(); bnext.dim(x)];
                    for (g2, p, c) in self.expand_dgen(m, g) {
                        let bp = path_cache
                            .entry((m + 1, p))
                            .or_insert_with(|| bnext.path_matrix(p));
                        let prev = &out[k + 1][g2];
                        for (a, v) in acc.iter_mut().zip(bp.mul_vec(prev)) {
                            *a += &(&c * &v);
                        }
                    }
                    for (r, v) in acc.into_iter().enumerate() {
                        rhs[(qx.rows() + r, col)] = v;
                    }
                }
                let y = solve_many(&sys, &rhs)
                    .expect("shapes agree")
                    .expect("lifting through a surjective quasi-isomorphism is solvable");
                for (col, &g) in here.iter().enumerate() {
                    sol[g] = y.column(col);
                }
            }
            debug_assert!(sol.iter().zip(&gens).all(|(s, &x)| s.len() == bm.dim(x)));
            out[k] = sol;
        }
        GenImages {
            lo: self.lo(),
            images: out,
        }
    }
}

/// A projective replacement `ε: P(X) → X`, degreewise surjective and a quasi-isomorphism.
#[derive(Clone, Debug)]
pub struct Replacement {
    pub proj: ProjComplex,
    pub eps: GenImages,
    pub eps_chain: ChainMap,
}

/// Builds `P(X)` from the top degree down.
///
/// At degree `m` the pullback `Q^m = {(x, p) ∈ X^m ⊕ Z^{m+1}(P) : d x = ε p}` is
/// covered by a free representation, which becomes `P^m`. Below the support the
/// pullback is `ker ε ∩ Z`, a subrepresentation of a projective, hence projective
/// over a hereditary algebra, so the process stops one degree under `X`.
/// A free term with the images of its generators under `ε` and `d`.
type Step = (FreeRep, Vec<Vec<Rat>>, Vec<Vec<Rat>>);

pub fn proj_replace(x: &Complex) -> Replacement {
    let quiver = x.quiver().clone();
    let nv = quiver.vertex_count();
    // Collected from the top down: (free, eps images, d images).
    let mut steps: Vec<Step> = Vec::new();
    let mut m = x.hi();
    let mut next: Option<(Rep, RepMap, RepMap)> = None;
    while !x.is_zero() {
        let xm = x.term(m);
        let (pnext, eps_next, d_next) = match &next {
            Some((p, e, d)) => (p.clone(), Some(e), Some(d)),
            None => (Rep::zero(quiver.clone()), None, None),
        };
        let amb = xm.direct_sum(&pnext);
        let bases: Vec<RatMatrix> = (0..nv)
            .map(|v| {
                let dx = x.diff_component(m, v);
                let kz = match d_next {
                    Some(d) => kernel_basis(d.component(v)).basis().clone(),
                    None => RatMatrix::zeros(0, 0),
                };
                let ez = match eps_next {
                    Some(e) => e.component(v) * &kz,
                    None => RatMatrix::zeros(dx.rows(), 0),
                };
                let sys = dx.hstack(&-&ez);
                let k = kernel_basis(&sys).basis().clone();
                let mut emb = RatMatrix::zeros(xm.dim(v) + pnext.dim(v), sys.cols());
                emb.set_block(0, 0, &RatMatrix::identity(xm.dim(v)));
                emb.set_block(xm.dim(v), xm.dim(v), &kz);
                &emb * &k
            })
            .collect();
        let (qrep, _) = amb.subrep(&bases).expect("pullbacks are subrepresentations");
        if m < x.lo() && qrep.is_zero() {
            break;
        }
        let cover = projective_cover(&qrep);
        let mut xparts = Vec::new();
        let mut pparts = Vec::new();
        for (g, &v) in cover.free.gens().iter().enumerate() {
            let full = bases[v].mul_vec(&cover.gen_vectors[g]);
            let (a, b) = full.split_at(xm.dim(v));
            xparts.push(a.to_vec());
            pparts.push(b.to_vec());
        }
        let free = cover.free;
        let eps_m = free.map_to(&xm, &xparts);
        let d_m = free.map_to(&pnext, &pparts);
        next = Some((free.rep().clone(), eps_m, d_m));
        steps.push((free, xparts, pparts));
        m -= 1;
    }
    steps.reverse();
    let lo = m + 1;
    build(x, lo, steps)
}

fn build(x: &Complex, lo: i32, steps: Vec<Step>) -> Replacement {
    let quiver = x.quiver().clone();
    let terms: Vec<Rep> = steps.iter().map(|s| s.0.rep().clone()).collect();
    let diffs: Vec<RepMap> = (0..steps.len().saturating_sub(1))
        .map(|k| steps[k].0.map_to(&terms[k + 1], &steps[k].2))
        .collect();
    // Pullback terms are never zero at the ends, so no trimming shifts the alignment.
    let complex = Complex::new_unchecked(quiver, lo, terms, diffs);
    debug_assert!(complex.is_zero() || complex.lo() == lo);
    debug_assert!(complex.is_zero() || complex.terms().len() == steps.len());
    let frees: Vec<FreeRep> = steps.iter().map(|s| s.0.clone()).collect();
    let dgen: Vec<Vec<Vec<Rat>>> = steps.iter().map(|s| s.2.clone()).collect();
    let eps = GenImages {
        lo: complex.lo(),
        images: steps.iter().map(|s| s.1.clone()).collect(),
    };
    let proj = ProjComplex {
        complex,
        frees,
        dgen,
    };
    let eps_chain = proj.chain_map(x, &eps);
    Replacement {
        proj,
        eps,
        eps_chain,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{fixture_q1, projective, simple};

    #[test]
    fn projective_module_replaces_itself() {
        let q = fixture_q1();
        let x = Complex::concentrated(&projective(&q, 0), 0);
        let r = proj_replace(&x);
        assert_eq!((r.proj.lo(), r.proj.hi()), (0, 0));
        assert_eq!(r.proj.complex().term(0).dims(), &[1, 1]);
        assert!(r.eps_chain.is_quasi_iso());
    }

    #[test]
    fn simple_gets_its_resolution() {
        let q = fixture_q1();
        let x = Complex::concentrated(&simple(&q, 0), 0);
        let r = proj_replace(&x);
        let p = r.proj.complex();
        assert_eq!((p.lo(), p.hi()), (-1, 0));
        assert_eq!(p.term(-1), projective(&q, 1));
        assert_eq!(p.term(0), projective(&q, 0));
        assert!(r.eps_chain.is_quasi_iso());
        assert!(r.eps_chain.component(0).is_surjective());
    }

    #[test]
    fn acyclic_complex_replaces_to_acyclic() {
        let q = fixture_q1();
        let su = simple(&q, 0);
        let x = Complex::new(q, 0, vec![su.clone(), su.clone()], vec![RepMap::identity(&su)])
            .unwrap();
        let r = proj_replace(&x);
        assert!(r.proj.complex().is_acyclic());
    }

    #[test]
    fn lift_through_own_augmentation() {
        let q = fixture_q1();
        let x = Complex::concentrated(&simple(&q, 0), 2);
        let r = proj_replace(&x);
        let p = r.proj.complex().clone();
        let f = r.proj.lift(&r.eps, &p, &r.eps_chain);
        let lifted = r.proj.chain_map(&p, &f);
        assert_eq!(r.eps_chain.compose(&lifted), r.eps_chain);
    }
}
