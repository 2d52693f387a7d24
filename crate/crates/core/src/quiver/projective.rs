use std::collections::HashMap;
use std::sync::Arc;

use super::{Rep, RepMap, WeightedQuiver};
use crate::linalg::{image_basis, quotient_with_section, Rat, RatMatrix};

/// The simple representation at `v`.
pub fn simple(q: &Arc<WeightedQuiver>, v: usize) -> Rep {
    let mut dims = vec![0; q.vertex_count()];
    dims[v] = 1;
    Rep::from_dims_zero(q.clone(), dims)
}

/// The indecomposable projective at `v`: paths out of `v`, arrows acting by concatenation.
pub fn projective(q: &Arc<WeightedQuiver>, v: usize) -> Rep {
    FreeRep::new(q.clone(), vec![v]).rep().clone()
}

/// A free representation `⊕_g P_{x_g}` with its path basis.
///
/// At vertex `w` the basis is ordered generator-major: `(g, p)` for every
/// generator `g` and path `p: x_g ⇝ w`.
#[derive(Clone, Debug)]
pub struct FreeRep {
    gens: Vec<usize>,
    basis: Vec<Vec<(usize, usize)>>,
    index: HashMap<(usize, usize), usize>,
    rep: Rep,
}

impl FreeRep {
    pub fn new(quiver: Arc<WeightedQuiver>, gens: Vec<usize>) -> Self {
        let n = quiver.vertex_count();
        let mut basis = vec![Vec::new(); n];
        let mut index = HashMap::new();
        for (g, &x) in gens.iter().enumerate() {
            for (w, bw) in basis.iter_mut().enumerate() {
                for &p in quiver.paths_between(x, w) {
                    index.insert((g, p), bw.len());
                    bw.push((g, p));
                }
            }
        }
        let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
        let mats = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let mut m = RatMatrix::zeros(dims[a.target], dims[a.source]);
                for (col, &(g, p)) in basis[a.source].iter().enumerate() {
                    let row = index[&(g, quiver.extend_path(p, ai))];
                    m[(row, col)] = Rat::one();
                }
                m
            })
            .collect();
        let rep = Rep::new_unchecked(quiver, dims, mats);
        FreeRep {
            gens,
            basis,
            index,
            rep,
        }
    }

    pub fn rep(&self) -> &Rep {
        &self.rep
    }

    pub fn quiver(&self) -> &Arc<WeightedQuiver> {
        self.rep.quiver()
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn gen_count(&self) -> usize {
        self.gens.len()
    }

    pub fn basis(&self, w: usize) -> &[(usize, usize)] {
        &self.basis[w]
    }

    /// Position of the basis vector `(g, p)` within its vertex.
    pub fn position(&self, g: usize, path: usize) -> usize {
        self.index[&(g, path)]
    }

    /// Position of generator `g` itself (the lazy path) at its vertex.
    pub fn gen_position(&self, g: usize) -> usize {
        let x = self.gens[g];
        self.position(g, self.quiver().paths_between(x, x)[0])
    }

    /// The unit vector of generator `g` in the space at its vertex.
    pub fn gen_vector(&self, g: usize) -> Vec<Rat> {
        let x = self.gens[g];
        let mut v = vec![Rat::zero(); self.rep.dim(x)];
        v[self.gen_position(g)] = Rat::one();
        v
    }

    /// The unique map sending generator `g` to `images[g] ∈ target_{x_g}`.
    pub fn map_to(&self, target: &Rep, images: &[Vec<Rat>]) -> RepMap {
        assert_eq!(images.len(), self.gens.len(), "one image per generator");
        let q = self.quiver();
        let mut path_cache: HashMap<usize, RatMatrix> = HashMap::new();
        let comps = (0..q.vertex_count())
            .map(|w| {
                let mut m = RatMatrix::zeros(target.dim(w), self.rep.dim(w));
                for (col, &(g, p)) in self.basis[w].iter().enumerate() {
                    let tp = path_cache.entry(p).or_insert_with(|| target.path_matrix(p));
                    let v = tp.mul_vec(&images[g]);
                    for (row, x) in v.into_iter().enumerate() {
                        if !x.is_zero() {
                            m[(row, col)] = x;
                        }
                    }
                }
                m
            })
            .collect();
        RepMap::new_unchecked(self.rep.clone(), target.clone(), comps)
    }

    /// Generator images of a map out of this free representation.
    pub fn images_of(&self, f: &RepMap) -> Vec<Vec<Rat>> {
        (0..self.gens.len())
            .map(|g| f.component(self.gens[g]).column(self.gen_position(g)))
            .collect()
    }

    /// The matrix `target_p` expanding a vector at `w` given in this free basis, as
    /// a linear combination `Σ c_{g,p} target_p(y_g)`; returned as `(g, p, c)` triples.
    pub fn expand(&self, w: usize, v: &[Rat]) -> Vec<(usize, usize, Rat)> {
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let (g, p) = self.basis[w][i];
                (g, p, c.clone())
            })
            .collect()
    }
}

/// A projective cover `F ↠ M`, generated by lifts of a basis of the top of `M`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub free: FreeRep,
    pub gen_vectors: Vec<Vec<Rat>>,
    pub map: RepMap,
}

impl ProjectiveCover {
    /// `M` is projective iff its cover is an isomorphism.
    pub fn is_iso(&self) -> bool {
        self.free.rep().dims() == self.map.target().dims()
    }
}

/// Projective cover of `m`; the radical at `x` is the sum of images of arrows into `x`.
pub fn projective_cover(m: &Rep) -> ProjectiveCover {
    let q = m.quiver().clone();
    let mut gens = Vec::new();
    let mut gen_vectors = Vec::new();
    for x in 0..q.vertex_count() {
        let d = m.dim(x);
        if d == 0 {
            continue;
        }
        let mut rad = RatMatrix::zeros(d, 0);
        for a in q.arrows_into(x) {
            rad = rad.hstack(m.matrix(a));
        }
        let rad = image_basis(&rad);
        let (_, section) = quotient_with_section(&rad);
        for c in section.columns() {
            gens.push(x);
            gen_vectors.push(c);
        }
    }
    let free = FreeRep::new(q, gens);
    let map = free.map_to(m, &gen_vectors);
    ProjectiveCover {
        free,
        gen_vectors,
        map,
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixture_q1;
    use super::*;

    #[test]
    fn projectives_over_q1() {
        let q = fixture_q1();
        let pv = projective(&q, 1);
        assert_eq!(pv, simple(&q, 1));
        let pu = projective(&q, 0);
        assert_eq!(pu.dims(), &[1, 1]);
        assert_eq!(pu.matrix(0), &RatMatrix::identity(1));
        let lone = WeightedQuiver::from_parts(&[("x", 3)], &[]).unwrap().into_arc();
        assert_eq!(projective(&lone, 0), simple(&lone, 0));
    }

    #[test]
    fn simple_has_total_dimension_one() {
        let q = fixture_q1();
        assert_eq!(simple(&q, 0).total_dim(), 1);
    }

    #[test]
    fn cover_of_simple_is_not_iso() {
        let q = fixture_q1();
        let c = projective_cover(&simple(&q, 0));
        assert!(!c.is_iso());
        assert!(c.map.is_surjective());
        assert_eq!(c.free.rep().dims(), &[1, 1]);
        assert!(projective_cover(&projective(&q, 0)).is_iso());
    }

    #[test]
    fn map_to_agrees_with_images() {
        let q = fixture_q1();
        let pu = projective(&q, 0);
        let f = FreeRep::new(q.clone(), vec![0, 0]);
        let imgs = vec![vec![Rat::from_int(2)], vec![Rat::from_int(-1)]];
        let m = f.map_to(&pu, &imgs);
        assert_eq!(f.images_of(&m), imgs);
        assert!(m.intertwining_failure().is_none());
    }
}
