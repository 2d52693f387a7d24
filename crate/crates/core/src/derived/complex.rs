use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{
    image_basis, kernel_basis, left_inverse, Rat, RatMatrix, Subspace,
};
use crate::quiver::{Rep, RepMap, WeightedQuiver};

/// A bounded cochain complex of representations; `d^n: X^n → X^{n+1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Complex {
    quiver: Arc<WeightedQuiver>,
    lo: i32,
    terms: Vec<Rep>,
    diffs: Vec<RepMap>,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_map();
        for (k, t) in self.terms.iter().enumerate() {
            l.entry(&(self.lo + k as i32), &t.dims());
        }
        l.finish()
    }
}

impl Complex {
    /// `terms[k]` sits in degree `lo + k`; `diffs[k]: terms[k] → terms[k + 1]`.
    pub fn new(
        quiver: Arc<WeightedQuiver>,
        lo: i32,
        terms: Vec<Rep>,
        diffs: Vec<RepMap>,
    ) -> Result<Self> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(Error::DimensionMismatch {
                context: "complex differentials",
                expected: terms.len().saturating_sub(1),
                found: diffs.len(),
            });
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source().dims() != terms[k].dims() || d.target().dims() != terms[k + 1].dims() {
                return Err(Error::Shape(format!(
                    "differential in degree {} does not match its terms",
                    lo + k as i32
                )));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].compose(&diffs[k - 1]).is_zero() {
                return Err(Error::DifferentialSquare(lo + k as i32 - 1));
            }
        }
        Ok(Complex {
            quiver,
            lo,
            terms,
            diffs,
        }
        .trimmed())
    }

    pub(crate) fn new_unchecked(
        quiver: Arc<WeightedQuiver>,
        lo: i32,
        terms: Vec<Rep>,
        diffs: Vec<RepMap>,
    ) -> Self {
        debug_assert_eq!(diffs.len() + 1, terms.len().max(1));
        Complex {
            quiver,
            lo,
            terms,
            diffs,
        }
        .trimmed()
    }

    pub fn zero(quiver: Arc<WeightedQuiver>) -> Self {
        Complex {
            quiver,
            lo: 0,
            terms: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// `M` placed in degree `n`.
    pub fn concentrated(m: &Rep, n: i32) -> Self {
        Complex::new_unchecked(m.quiver().clone(), n, vec![m.clone()], Vec::new())
    }

    /// A complex with zero differentials and the given terms.
    pub fn formal(quiver: Arc<WeightedQuiver>, pieces: &[(i32, Rep)]) -> Self {
        let Some(lo) = pieces.iter().map(|p| p.0).min() else {
            return Complex::zero(quiver);
        };
        let hi = pieces.iter().map(|p| p.0).max().expect("nonempty");
        let terms: Vec<Rep> = (lo..=hi)
            .map(|n| {
                let parts: Vec<Rep> = pieces
                    .iter()
                    .filter(|p| p.0 == n)
                    .map(|p| p.1.clone())
                    .collect();
                Rep::sum_of(quiver.clone(), &parts).0
            })
            .collect();
        let diffs = terms.windows(2).map(|w| RepMap::zero(&w[0], &w[1])).collect();
        Complex::new_unchecked(quiver, lo, terms, diffs)
    }

    fn trimmed(mut self) -> Self {
        while self.terms.last().is_some_and(Rep::is_zero) {
            self.terms.pop();
            self.diffs.pop();
        }
        while self.terms.first().is_some_and(Rep::is_zero) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        if self.terms.is_empty() {
            self.lo = 0;
            self.diffs.clear();
        }
        self
    }

    pub fn quiver(&self) -> &Arc<WeightedQuiver> {
        &self.quiver
    }

    /// Lowest degree of a nonzero term (0 for the zero complex).
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest degree of a nonzero term (`lo − 1` for the zero complex).
    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo()..=self.hi()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, n: i32) -> Rep {
        if n < self.lo || n > self.hi() {
            Rep::zero(self.quiver.clone())
        } else {
            self.terms[(n - self.lo) as usize].clone()
        }
    }

    pub fn terms(&self) -> &[Rep] {
        &self.terms
    }

    /// `d^n: X^n → X^{n+1}`, zero outside the support.
    pub fn diff(&self, n: i32) -> RepMap {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            RepMap::zero(&self.term(n), &self.term(n + 1))
        }
    }

    pub(crate) fn diff_component(&self, n: i32, v: usize) -> RatMatrix {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].component(v).clone()
        } else {
            RatMatrix::zeros(self.term(n + 1).dim(v), self.term(n).dim(v))
        }
    }

    /// `X[k]^n = X^{n+k}`, differential multiplied by `(−1)^k`.
    pub fn shift(&self, k: i32) -> Complex {
        let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        Complex {
            quiver: self.quiver.clone(),
            lo: if self.is_zero() { 0 } else { self.lo - k },
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&sign)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Complex) -> Complex {
        direct_sum(self.quiver.clone(), &[self.clone(), other.clone()]).0
    }

    pub fn cohomology(&self, n: i32) -> Cohomology {
        Cohomology::new(self, n)
    }

    /// Dimension vector of `H^n`, without building the representation.
    pub fn cohomology_dims(&self, n: i32) -> Vec<usize> {
        (0..self.quiver.vertex_count())
            .map(|v| {
                let d = self.diff_component(n, v);
                let prev = self.diff_component(n - 1, v);
                d.cols() - d.rank() - prev.rank()
            })
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees()
            .all(|n| self.cohomology_dims(n).iter().all(|&d| d == 0))
    }

    /// Lowest and highest degree with nonzero cohomology.
    pub fn cohomology_range(&self) -> Option<(i32, i32)> {
        let nz: Vec<i32> = self
            .degrees()
            .filter(|&n| self.cohomology_dims(n).iter().any(|&d| d > 0))
            .collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// Stupid truncation: the terms in degrees `≥ n`.
    pub fn stupid_ge(&self, n: i32) -> (Complex, ChainMap) {
        let lo = n.max(self.lo);
        let terms: Vec<Rep> = (lo..=self.hi()).map(|k| self.term(k)).collect();
        let diffs: Vec<RepMap> = (lo..self.hi()).map(|k| self.diff(k)).collect();
        let sub = Complex::new_unchecked(self.quiver.clone(), lo, terms, diffs);
        let comps = sub
            .degrees()
            .map(|k| RepMap::identity(&sub.term(k)))
            .collect();
        let incl = ChainMap::new_unchecked(sub.clone(), self.clone(), comps);
        (sub, incl)
    }
}

/// `⊕ parts` with the canonical inclusions and projections.
pub fn direct_sum(
    quiver: Arc<WeightedQuiver>,
    parts: &[Complex],
) -> (Complex, Vec<ChainMap>, Vec<ChainMap>) {
    let nonzero: Vec<&Complex> = parts.iter().filter(|c| !c.is_zero()).collect();
    let (lo, hi) = match (
        nonzero.iter().map(|c| c.lo()).min(),
        nonzero.iter().map(|c| c.hi()).max(),
    ) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => (0, -1),
    };
    let mut terms = Vec::new();
    let mut incl_t: Vec<Vec<RepMap>> = vec![Vec::new(); parts.len()];
    let mut proj_t: Vec<Vec<RepMap>> = vec![Vec::new(); parts.len()];
    for n in lo..=hi {
        let reps: Vec<Rep> = parts.iter().map(|c| c.term(n)).collect();
        let (s, inc, pr) = Rep::sum_of(quiver.clone(), &reps);
        terms.push(s);
        for (k, (i, p)) in inc.into_iter().zip(pr).enumerate() {
            incl_t[k].push(i);
            proj_t[k].push(p);
        }
    }
    let diffs: Vec<RepMap> = (lo..hi)
        .map(|n| {
            let k = (n - lo) as usize;
            let comps = (0..quiver.vertex_count())
                .map(|v| {
                    let blocks: Vec<RatMatrix> =
                        parts.iter().map(|c| c.diff_component(n, v)).collect();
                    RatMatrix::block_diag(&blocks.iter().collect::<Vec<_>>())
                })
                .collect();
            RepMap::new_unchecked(terms[k].clone(), terms[k + 1].clone(), comps)
        })
        .collect();
    let sum = Complex {
        quiver: quiver.clone(),
        lo,
        terms,
        diffs,
    };
    let incls = parts
        .iter()
        .zip(incl_t)
        .map(|(c, maps)| {
            let comps = c
                .degrees()
                .map(|n| maps[(n - lo) as usize].clone())
                .collect();
            ChainMap::new_unchecked(c.clone(), sum.clone(), comps)
        })
        .collect();
    let projs = parts
        .iter()
        .zip(proj_t)
        .map(|(c, maps)| {
            let comps = (lo..=hi)
                .map(|n| maps[(n - lo) as usize].clone())
                .collect();
            ChainMap::new_unchecked(sum.clone(), c.clone(), comps)
        })
        .collect();
    (sum, incls, projs)
}

/// `H^n = ker d^n / im d^{n−1}` with the linear data to move between cycles and classes.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i32,
    pub rep: Rep,
    /// Per vertex: basis of the cycles as columns in `X^n`.
    pub cycles: Vec<RatMatrix>,
    /// Per vertex: class of a cycle, `H_x × X^n_x` (meaningful on cycles only).
    pub class_map: Vec<RatMatrix>,
    /// Per vertex: a cycle representing each basis class, `X^n_x × H_x`.
    pub section: Vec<RatMatrix>,
}

impl Cohomology {
    fn new(x: &Complex, n: i32) -> Self {
        let q = x.quiver().clone();
        let term = x.term(n);
        let mut cycles = Vec::new();
        let mut bounds = Vec::new();
        let mut left = Vec::new();
        for v in 0..q.vertex_count() {
            let k = kernel_basis(&x.diff_component(n, v)).basis().clone();
            let l = left_inverse(&k).expect("kernel basis is independent");
            let b = image_basis(&x.diff_component(n - 1, v));
            bounds.push(b.map(&l));
            cycles.push(k);
            left.push(l);
        }
        let (z, _) = term.subrep(&cycles).expect("cycles form a subrepresentation");
        let (rep, proj, secs) = z
            .quotient(&bounds)
            .expect("boundaries form a subrepresentation");
        let class_map = (0..q.vertex_count())
            .map(|v| proj.component(v) * &left[v])
            .collect();
        let section = (0..q.vertex_count())
            .map(|v| &cycles[v] * &secs[v])
            .collect();
        Cohomology {
            degree: n,
            rep,
            cycles,
            class_map,
            section,
        }
    }

    /// The boundary subspace at `v`, in `X^n` coordinates.
    pub fn boundaries(x: &Complex, n: i32, v: usize) -> Subspace {
        image_basis(&x.diff_component(n - 1, v))
    }
}

/// A morphism of complexes, stored on the degrees of the source.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    comps: Vec<RepMap>,
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChainMap")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("comps", &self.comps)
            .finish()
    }
}

impl ChainMap {
    /// `comps[k]` is the component in degree `source.lo() + k`.
    pub fn new(source: Complex, target: Complex, comps: Vec<RepMap>) -> Result<Self> {
        if comps.len() != source.terms.len() {
            return Err(Error::DimensionMismatch {
                context: "chain map components",
                expected: source.terms.len(),
                found: comps.len(),
            });
        }
        for (k, c) in comps.iter().enumerate() {
            let n = source.lo + k as i32;
            if c.source().dims() != source.term(n).dims()
                || c.target().dims() != target.term(n).dims()
            {
                return Err(Error::Shape(format!(
                    "chain map component in degree {n} does not match its terms"
                )));
            }
        }
        let f = ChainMap {
            source,
            target,
            comps,
        };
        if let Some(n) = f.commutation_failure() {
            return Err(Error::NotChainMap(n));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: Complex, target: Complex, comps: Vec<RepMap>) -> Self {
        let f = ChainMap {
            source,
            target,
            comps,
        };
        debug_assert_eq!(f.comps.len(), f.source.terms.len());
        debug_assert!(f.commutation_failure().is_none(), "not a chain map");
        f
    }

    /// First degree `n` with `d_Y f^n ≠ f^{n+1} d_X`.
    pub fn commutation_failure(&self) -> Option<i32> {
        let lo = self.source.lo().min(self.target.lo()) - 1;
        let hi = self.source.hi().max(self.target.hi());
        (lo..=hi).find(|&n| {
            let lhs = self.target.diff(n).compose(&self.component(n));
            let rhs = self.component(n + 1).compose(&self.source.diff(n));
            lhs != rhs
        })
    }

    pub fn identity(x: &Complex) -> Self {
        let comps = x.degrees().map(|n| RepMap::identity(&x.term(n))).collect();
        ChainMap::new_unchecked(x.clone(), x.clone(), comps)
    }

    pub fn zero(source: &Complex, target: &Complex) -> Self {
        let comps = source
            .degrees()
            .map(|n| RepMap::zero(&source.term(n), &target.term(n)))
            .collect();
        ChainMap::new_unchecked(source.clone(), target.clone(), comps)
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn component(&self, n: i32) -> RepMap {
        if n < self.source.lo || n > self.source.hi() {
            RepMap::zero(&self.source.term(n), &self.target.term(n))
        } else {
            self.comps[(n - self.source.lo) as usize].clone()
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &ChainMap) -> ChainMap {
        let comps = g
            .source
            .degrees()
            .map(|n| self.component(n).compose(&g.component(n)))
            .collect();
        ChainMap::new_unchecked(g.source.clone(), self.target.clone(), comps)
    }

    pub fn add(&self, g: &ChainMap) -> ChainMap {
        let comps = self
            .source
            .degrees()
            .map(|n| self.component(n).add(&g.component(n)))
            .collect();
        ChainMap::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn scale(&self, c: &Rat) -> ChainMap {
        let comps = self.comps.iter().map(|f| f.scale(c)).collect();
        ChainMap::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RepMap::is_zero)
    }

    /// `f[k]: X[k] → Y[k]`, with `f[k]^n = f^{n+k}`.
    pub fn shift(&self, k: i32) -> ChainMap {
        let s = self.source.shift(k);
        let t = self.target.shift(k);
        let comps = s.degrees().map(|n| self.component(n + k)).collect();
        ChainMap::new_unchecked(s, t, comps)
    }

    /// Per vertex, the matrix of `H^n(f)` in the cohomology bases.
    pub fn cohomology_map(&self, n: i32, hx: &Cohomology, hy: &Cohomology) -> Vec<RatMatrix> {
        (0..self.source.quiver().vertex_count())
            .map(|v| &(&hy.class_map[v] * self.component(n).component(v)) * &hx.section[v])
            .collect()
    }

    /// Whether `H^n(f)` is invertible for every `n`.
    pub fn is_quasi_iso(&self) -> bool {
        let lo = self.source.lo().min(self.target.lo());
        let hi = self.source.hi().max(self.target.hi());
        (lo..=hi).all(|n| {
            let hx = self.source.cohomology(n);
            let hy = self.target.cohomology(n);
            hx.rep.dims() == hy.rep.dims()
                && self
                    .cohomology_map(n, &hx, &hy)
                    .iter()
                    .all(|m| m.rank() == m.rows())
        })
    }

    /// `cone(f)^n = X^{n+1} ⊕ Y^n`, `d(a, b) = (−d a, f a + d b)`, with `Y → cone` and `cone → X[1]`.
    pub fn cone(&self) -> (Complex, ChainMap, ChainMap) {
        let x = &self.source;
        let y = &self.target;
        let q = x.quiver().clone();
        let xs = x.shift(1);
        let (sum, incl, proj) = direct_sum(q.clone(), &[xs.clone(), y.clone()]);
        let lo = sum.lo();
        let hi = sum.hi();
        let diffs = (lo..hi)
            .map(|n| {
                let comps = (0..q.vertex_count())
                    .map(|v| {
                        let a = x.term(n + 1).dim(v);
                        let b = y.term(n).dim(v);
                        let a2 = x.term(n + 2).dim(v);
                        let b2 = y.term(n + 1).dim(v);
                        let mut m = RatMatrix::zeros(a2 + b2, a + b);
                        m.set_block(0, 0, &-&x.diff_component(n + 1, v));
                        m.set_block(a2, 0, self.component(n + 1).component(v));
                        m.set_block(a2, a, &y.diff_component(n, v));
                        m
                    })
                    .collect();
                RepMap::new_unchecked(sum.term(n), sum.term(n + 1), comps)
            })
            .collect();
        let cone = Complex::new_unchecked(q, lo, sum.terms.clone(), diffs);
        let iota = ChainMap::new_unchecked(
            y.clone(),
            cone.clone(),
            y.degrees().map(|n| incl[1].component(n)).collect(),
        );
        let pi = ChainMap::new_unchecked(
            cone.clone(),
            xs,
            cone.degrees().map(|n| proj[0].component(n)).collect(),
        );
        (cone, iota, pi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{fixture_q1, projective, simple};

    fn incl_pv_pu() -> Complex {
        let q = fixture_q1();
        let pv = projective(&q, 1);
        let pu = projective(&q, 0);
        let d = RepMap::new(
            pv.clone(),
            pu.clone(),
            vec![RatMatrix::zeros(1, 0), RatMatrix::identity(1)],
        )
        .unwrap();
        Complex::new(q, 0, vec![pv, pu], vec![d]).unwrap()
    }

    #[test]
    fn cohomology_examples() {
        let q = fixture_q1();
        let pu = projective(&q, 0);
        let x = Complex::concentrated(&pu, 0);
        assert_eq!(x.cohomology(0).rep, pu);
        assert!(x.cohomology(1).rep.is_zero());

        let sv = simple(&q, 1);
        let id = RepMap::identity(&sv);
        let c = Complex::new(q.clone(), 0, vec![sv.clone(), sv.clone()], vec![id]).unwrap();
        assert!(c.is_acyclic());

        let x = incl_pv_pu();
        assert!(x.cohomology(0).rep.is_zero());
        assert_eq!(x.cohomology(1).rep, simple(&q, 0));
    }

    #[test]
    fn rejects_nonzero_square() {
        let q = fixture_q1();
        let sv = simple(&q, 1);
        let id = RepMap::identity(&sv);
        let r = Complex::new(
            q,
            3,
            vec![sv.clone(), sv.clone(), sv.clone()],
            vec![id.clone(), id],
        );
        assert!(matches!(r, Err(Error::DifferentialSquare(3))));
    }

    #[test]
    fn shift_moves_support_and_negates() {
        let x = incl_pv_pu();
        let s = x.shift(1);
        assert_eq!((s.lo(), s.hi()), (-1, 0));
        assert_eq!(s.diff(-1), x.diff(0).scale(&-Rat::one()));
        assert_eq!(s.cohomology_dims(0), vec![1, 0]);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let x = incl_pv_pu();
        let (c, _, _) = ChainMap::identity(&x).cone();
        assert!(c.is_acyclic());
        assert!(!c.is_zero());
    }

    #[test]
    fn cone_of_zero_is_sum() {
        let q = fixture_q1();
        let a = Complex::concentrated(&simple(&q, 0), 0);
        let b = Complex::concentrated(&simple(&q, 1), 0);
        let (c, _, _) = ChainMap::zero(&a, &b).cone();
        assert_eq!(c.cohomology_dims(0), vec![0, 1]);
        assert_eq!(c.cohomology_dims(-1), vec![1, 0]);
    }

    #[test]
    fn chain_map_validation() {
        let x = incl_pv_pu();
        let q = x.quiver().clone();
        let su = simple(&q, 0);
        let y = Complex::concentrated(&su, 1);
        let proj = crate::quiver::hom_basis(&projective(&q, 0), &su).unwrap().remove(0);
        let zero = RepMap::zero(&x.term(0), &y.term(0));
        let f = ChainMap::new(x.clone(), y.clone(), vec![zero.clone(), proj]).unwrap();
        assert!(f.is_quasi_iso());
        assert!(!ChainMap::zero(&x, &y).is_quasi_iso());
        let pu = Complex::concentrated(&projective(&q, 0), 1);
        let bad = ChainMap::new(x.clone(), pu, vec![zero, RepMap::identity(&projective(&q, 0))]);
        assert!(matches!(bad, Err(Error::NotChainMap(0))));
        assert!(ChainMap::identity(&x).is_quasi_iso());
    }
}
