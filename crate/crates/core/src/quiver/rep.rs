use std::fmt;
use std::sync::Arc;

use super::WeightedQuiver;
use crate::error::{Error, Result};
use crate::linalg::{
    image_basis, kernel_basis, quotient_with_section, solve_many, Rat, RatMatrix, Subspace,
};

struct RepData {
    quiver: Arc<WeightedQuiver>,
    dims: Vec<usize>,
    mats: Vec<RatMatrix>,
}

/// A finite-dimensional representation: a vector space per vertex, a matrix per arrow.
///
/// Cheap to clone; the data is shared and immutable.
#[derive(Clone)]
pub struct Rep(Arc<RepData>);

impl Rep {
    pub fn new(quiver: Arc<WeightedQuiver>, dims: Vec<usize>, mats: Vec<RatMatrix>) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::DimensionMismatch {
                context: "representation vertices",
                expected: quiver.vertex_count(),
                found: dims.len(),
            });
        }
        if mats.len() != quiver.arrow_count() {
            return Err(Error::DimensionMismatch {
                context: "representation arrows",
                expected: quiver.arrow_count(),
                found: mats.len(),
            });
        }
        for (a, m) in quiver.arrows().iter().zip(&mats) {
            if m.shape() != (dims[a.target], dims[a.source]) {
                return Err(Error::Shape(format!(
                    "arrow `{}` needs a {}x{} matrix, got {}x{}",
                    a.id,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Rep(Arc::new(RepData { quiver, dims, mats })))
    }

    pub(crate) fn new_unchecked(
        quiver: Arc<WeightedQuiver>,
        dims: Vec<usize>,
        mats: Vec<RatMatrix>,
    ) -> Self {
        debug_assert!(quiver
            .arrows()
            .iter()
            .zip(&mats)
            .all(|(a, m)| m.shape() == (dims[a.target], dims[a.source])));
        Rep(Arc::new(RepData { quiver, dims, mats }))
    }

    pub fn zero(quiver: Arc<WeightedQuiver>) -> Self {
        let n = quiver.vertex_count();
        Self::from_dims_zero(quiver, vec![0; n])
    }

    /// The representation with the given dimensions and all arrow matrices zero.
    pub fn from_dims_zero(quiver: Arc<WeightedQuiver>, dims: Vec<usize>) -> Self {
        let mats = quiver
            .arrows()
            .iter()
            .map(|a| RatMatrix::zeros(dims[a.target], dims[a.source]))
            .collect();
        Self::new_unchecked(quiver, dims, mats)
    }

    pub fn quiver(&self) -> &Arc<WeightedQuiver> {
        &self.0.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.0.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.0.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.0.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn matrix(&self, a: usize) -> &RatMatrix {
        &self.0.mats[a]
    }

    pub fn matrices(&self) -> &[RatMatrix] {
        &self.0.mats
    }

    pub fn same_quiver(&self, other: &Rep) -> bool {
        Arc::ptr_eq(self.quiver(), other.quiver()) || **self.quiver() == **other.quiver()
    }

    pub(crate) fn check_same_quiver(&self, other: &Rep) -> Result<()> {
        if self.same_quiver(other) {
            Ok(())
        } else {
            Err(Error::QuiverMismatch)
        }
    }

    /// The linear map `M_p: M_{source} → M_{target}` of a path.
    pub fn path_matrix(&self, path: usize) -> RatMatrix {
        let p = self.quiver().path(path);
        let mut m = RatMatrix::identity(self.dim(p.source));
        for &a in &p.arrows {
            m = self.matrix(a) * &m;
        }
        m
    }

    /// Vertex support: weights of vertices with nonzero space.
    pub fn support_weights(&self) -> Vec<i32> {
        let q = self.quiver();
        let mut w: Vec<i32> = (0..q.vertex_count())
            .filter(|&v| self.dim(v) > 0)
            .map(|v| q.weight(v))
            .collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        Self::sum_of(self.quiver().clone(), &[self.clone(), other.clone()]).0
    }

    /// `⊕ parts` together with the canonical inclusions and projections.
    pub fn sum_of(quiver: Arc<WeightedQuiver>, parts: &[Rep]) -> (Rep, Vec<RepMap>, Vec<RepMap>) {
        let n = quiver.vertex_count();
        let dims: Vec<usize> = (0..n).map(|v| parts.iter().map(|p| p.dim(v)).sum()).collect();
        let mats = (0..quiver.arrow_count())
            .map(|a| {
                let blocks: Vec<&RatMatrix> = parts.iter().map(|p| p.matrix(a)).collect();
                RatMatrix::block_diag(&blocks)
            })
            .collect();
        let sum = Rep::new_unchecked(quiver, dims.clone(), mats);
        let mut offsets = vec![0usize; n];
        let mut incls = Vec::new();
        let mut projs = Vec::new();
        for p in parts {
            let mut inc = Vec::with_capacity(n);
            let mut pr = Vec::with_capacity(n);
            for v in 0..n {
                let mut i = RatMatrix::zeros(dims[v], p.dim(v));
                i.set_block(offsets[v], 0, &RatMatrix::identity(p.dim(v)));
                pr.push(i.transpose());
                inc.push(i);
                offsets[v] += p.dim(v);
            }
            incls.push(RepMap::new_unchecked(p.clone(), sum.clone(), inc));
            projs.push(RepMap::new_unchecked(sum.clone(), p.clone(), pr));
        }
        (sum, incls, projs)
    }

    /// The subrepresentation spanned at each vertex by the columns of `bases`.
    ///
    /// Fails with `NotIntertwiner` when some arrow leaves the family.
    pub fn subrep(&self, bases: &[RatMatrix]) -> Result<(Rep, RepMap)> {
        let q = self.quiver().clone();
        let mut mats = Vec::with_capacity(q.arrow_count());
        for (ai, a) in q.arrows().iter().enumerate() {
            let img = self.matrix(ai) * &bases[a.source];
            let m = solve_many(&bases[a.target], &img)?
                .ok_or_else(|| Error::NotIntertwiner(a.id.clone()))?;
            mats.push(m);
        }
        let dims = bases.iter().map(|b| b.cols()).collect();
        let sub = Rep::new_unchecked(q, dims, mats);
        let incl = RepMap::new_unchecked(sub.clone(), self.clone(), bases.to_vec());
        Ok((sub, incl))
    }

    /// The quotient by an invariant family of subspaces, with projection and per-vertex sections.
    pub fn quotient(&self, subs: &[Subspace]) -> Result<(Rep, RepMap, Vec<RatMatrix>)> {
        let q = self.quiver().clone();
        let mut projs = Vec::with_capacity(q.vertex_count());
        let mut sections = Vec::with_capacity(q.vertex_count());
        for s in subs {
            let (p, sec) = quotient_with_section(s);
            projs.push(p);
            sections.push(sec);
        }
        for (ai, a) in q.arrows().iter().enumerate() {
            let img = &(&projs[a.target] * self.matrix(ai)) * subs[a.source].basis();
            if !img.is_zero() {
                return Err(Error::NotIntertwiner(a.id.clone()));
            }
        }
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| &(&projs[a.target] * self.matrix(ai)) * &sections[a.source])
            .collect();
        let dims = projs.iter().map(|p| p.rows()).collect();
        let quot = Rep::new_unchecked(q, dims, mats);
        let proj = RepMap::new_unchecked(self.clone(), quot.clone(), projs);
        Ok((quot, proj, sections))
    }

    /// Same dimensions and the same arrow matrices.
    pub fn equal_data(&self, other: &Rep) -> bool {
        self.same_quiver(other) && self.dims() == other.dims() && self.matrices() == other.matrices()
    }
}

impl PartialEq for Rep {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.equal_data(other)
    }
}

impl Eq for Rep {}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.quiver();
        let mut s = f.debug_struct("Rep");
        let dims: Vec<(&str, usize)> = (0..q.vertex_count())
            .map(|v| (q.vertex_id(v), self.dim(v)))
            .collect();
        s.field("dims", &dims);
        for (a, m) in q.arrows().iter().zip(self.matrices()) {
            s.field(&a.id, m);
        }
        s.finish()
    }
}

/// A morphism of representations: one matrix per vertex, intertwining every arrow.
#[derive(Clone, PartialEq, Eq)]
pub struct RepMap {
    source: Rep,
    target: Rep,
    comps: Vec<RatMatrix>,
}

impl fmt::Debug for RepMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RepMap")
            .field("source", &self.source.dims())
            .field("target", &self.target.dims())
            .field("comps", &self.comps)
            .finish()
    }
}

impl RepMap {
    pub fn new(source: Rep, target: Rep, comps: Vec<RatMatrix>) -> Result<Self> {
        source.check_same_quiver(&target)?;
        let q = source.quiver().clone();
        if comps.len() != q.vertex_count() {
            return Err(Error::DimensionMismatch {
                context: "map components",
                expected: q.vertex_count(),
                found: comps.len(),
            });
        }
        for (v, c) in comps.iter().enumerate() {
            if c.shape() != (target.dim(v), source.dim(v)) {
                return Err(Error::Shape(format!(
                    "component at `{}` needs {}x{}, got {}x{}",
                    q.vertex_id(v),
                    target.dim(v),
                    source.dim(v),
                    c.rows(),
                    c.cols()
                )));
            }
        }
        let f = RepMap {
            source,
            target,
            comps,
        };
        if let Some(a) = f.intertwining_failure() {
            return Err(Error::NotIntertwiner(q.arrows()[a].id.clone()));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: Rep, target: Rep, comps: Vec<RatMatrix>) -> Self {
        let f = RepMap {
            source,
            target,
            comps,
        };
        debug_assert!(f.intertwining_failure().is_none(), "map does not intertwine");
        f
    }

    /// First arrow `a: u → v` with `f_v M_a ≠ N_a f_u`.
    pub fn intertwining_failure(&self) -> Option<usize> {
        let q = self.source.quiver();
        q.arrows().iter().enumerate().find_map(|(ai, a)| {
            let lhs = &self.comps[a.target] * self.source.matrix(ai);
            let rhs = self.target.matrix(ai) * &self.comps[a.source];
            (lhs != rhs).then_some(ai)
        })
    }

    pub fn identity(m: &Rep) -> Self {
        let comps = m.dims().iter().map(|&d| RatMatrix::identity(d)).collect();
        RepMap::new_unchecked(m.clone(), m.clone(), comps)
    }

    pub fn zero(source: &Rep, target: &Rep) -> Self {
        let comps = (0..source.quiver().vertex_count())
            .map(|v| RatMatrix::zeros(target.dim(v), source.dim(v)))
            .collect();
        RepMap::new_unchecked(source.clone(), target.clone(), comps)
    }

    pub fn source(&self) -> &Rep {
        &self.source
    }

    pub fn target(&self) -> &Rep {
        &self.target
    }

    pub fn component(&self, v: usize) -> &RatMatrix {
        &self.comps[v]
    }

    pub fn components(&self) -> &[RatMatrix] {
        &self.comps
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RepMap) -> RepMap {
        assert_eq!(g.target.dims(), self.source.dims(), "composition mismatch");
        let comps = self.comps.iter().zip(&g.comps).map(|(a, b)| a * b).collect();
        RepMap::new_unchecked(g.source.clone(), self.target.clone(), comps)
    }

    pub fn add(&self, g: &RepMap) -> RepMap {
        let comps = self.comps.iter().zip(&g.comps).map(|(a, b)| a + b).collect();
        RepMap::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn sub(&self, g: &RepMap) -> RepMap {
        let comps = self.comps.iter().zip(&g.comps).map(|(a, b)| a - b).collect();
        RepMap::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn scale(&self, c: &Rat) -> RepMap {
        let comps = self.comps.iter().map(|a| a.scale(c)).collect();
        RepMap::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RatMatrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.comps.iter().all(RatMatrix::is_identity)
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn rank_vector(&self) -> Vec<usize> {
        self.comps.iter().map(RatMatrix::rank).collect()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<RepMap> {
        let comps = self
            .comps
            .iter()
            .map(|c| c.inverse().ok_or(Error::NotInvertible))
            .collect::<Result<Vec<_>>>()?;
        Ok(RepMap::new_unchecked(
            self.target.clone(),
            self.source.clone(),
            comps,
        ))
    }

    pub fn kernel(&self) -> (Rep, RepMap) {
        let bases: Vec<RatMatrix> = self
            .comps
            .iter()
            .map(|c| kernel_basis(c).basis().clone())
            .collect();
        self.source.subrep(&bases).expect("kernels are invariant")
    }

    pub fn image(&self) -> (Rep, RepMap) {
        let bases: Vec<RatMatrix> = self
            .comps
            .iter()
            .map(|c| image_basis(c).basis().clone())
            .collect();
        self.target.subrep(&bases).expect("images are invariant")
    }

    pub fn image_subspaces(&self) -> Vec<Subspace> {
        self.comps.iter().map(image_basis).collect()
    }

    pub fn cokernel(&self) -> (Rep, RepMap) {
        let (c, p, _) = self
            .target
            .quotient(&self.image_subspaces())
            .expect("images are invariant");
        (c, p)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{fixture_q1, projective, simple};
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_non_intertwiners() {
        let q = fixture_q1();
        assert!(Rep::new(q.clone(), vec![1, 1], vec![RatMatrix::zeros(2, 1)]).is_err());
        let pu = projective(&q, 0);
        let su = simple(&q, 0);
        // Identity at u, zero at v does not intertwine P_u → P_u.
        let bad = RepMap::new(
            pu.clone(),
            pu.clone(),
            vec![RatMatrix::identity(1), RatMatrix::zeros(1, 1)],
        );
        assert!(matches!(bad, Err(Error::NotIntertwiner(_))));
        assert!(RepMap::new(pu, su, vec![RatMatrix::identity(1), RatMatrix::zeros(0, 1)]).is_ok());
    }

    #[test]
    fn kernel_cokernel_image_examples() {
        let q = fixture_q1();
        let pu = projective(&q, 0);
        let (k, _) = RepMap::identity(&pu).kernel();
        assert!(k.is_zero());
        let (c, _) = RepMap::zero(&Rep::zero(q.clone()), &pu).cokernel();
        assert_eq!(c, pu);
        let su = simple(&q, 0);
        let f = RepMap::new(
            pu.clone(),
            su.clone(),
            vec![RatMatrix::identity(1), RatMatrix::zeros(0, 1)],
        )
        .unwrap();
        let (im, _) = f.image();
        assert_eq!(im.dims(), su.dims());
        let (k, inc) = f.kernel();
        assert_eq!(k.dims(), &[0, 1]);
        assert!(f.compose(&inc).is_zero());
    }

    #[test]
    fn direct_sum_projections_split() {
        let q = fixture_q1();
        let pu = projective(&q, 0);
        let sv = simple(&q, 1);
        let (_, inc, pr) = Rep::sum_of(q.clone(), &[pu.clone(), sv.clone()]);
        assert!(pr[0].compose(&inc[0]).is_identity());
        assert!(pr[1].compose(&inc[0]).is_zero());
    }
}
