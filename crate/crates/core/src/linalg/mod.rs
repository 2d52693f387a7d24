//! Exact linear algebra over the rationals.
//!
//! Every Hom, Ext, kernel, image and quotient in the engine bottoms out here.
//! Vectors are plain `Vec<Rat>`; subspaces carry a column basis.

mod matrix;
mod rat;

pub use matrix::RatMatrix;
pub use rat::{ParseRatError, Rat};

use crate::error::{Error, Result};

/// A linear subspace of `Q^ambient_dim`, stored by a basis of linearly independent columns.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RatMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RatMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RatMatrix::identity(ambient_dim),
        }
    }

    /// The span of the columns of `m`.
    pub fn span(m: &RatMatrix) -> Self {
        image_basis(m)
    }

    pub fn span_of(ambient_dim: usize, vectors: &[Vec<Rat>]) -> Self {
        image_basis(&RatMatrix::from_columns(ambient_dim, vectors))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rat>> {
        self.basis.columns()
    }

    /// Canonical representative: the rref of the transposed basis.
    pub fn canonical(&self) -> RatMatrix {
        let (r, p) = self.basis.transpose().rref();
        r.select_rows(&(0..p.len()).collect::<Vec<_>>())
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        solve(&self.basis, v).expect("shape checked").is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient mismatch");
        self.basis_vectors().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient mismatch");
        image_basis(&self.basis.hstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient mismatch");
        // [A | -B] (x, y) = 0  =>  A x lies in both.
        let m = self.basis.hstack(&-&other.basis);
        let k = kernel_basis(&m);
        let coeffs = k.basis.submatrix(0, 0, self.dim(), k.dim());
        image_basis(&(&self.basis * &coeffs))
    }

    /// Image of this subspace under `m` (a linear map out of the ambient space).
    pub fn map(&self, m: &RatMatrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient_dim, "map shape mismatch");
        image_basis(&(m * &self.basis))
    }

    /// Preimage under `m` of `target`.
    pub fn preimage(m: &RatMatrix, target: &Subspace) -> Subspace {
        assert_eq!(m.rows(), target.ambient_dim, "map shape mismatch");
        let (proj, _) = quotient_map(target.ambient_dim, target).expect("same ambient");
        kernel_basis(&(&proj * m))
    }

    /// Coordinates of `v` in this basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        solve(&self.basis, v).expect("shape checked")
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && self.canonical() == other.canonical()
    }
}

impl Eq for Subspace {}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    m.rref()
}

pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}

/// Basis of `{v : m v = 0}`, one vector per free column of the rref.
pub fn kernel_basis(m: &RatMatrix) -> Subspace {
    let n = m.cols();
    let (r, pivots) = m.rref();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    let mut basis = RatMatrix::zeros(n, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = Rat::one();
        for (row, &p) in pivots.iter().enumerate() {
            let x = &r[(row, f)];
            if !x.is_zero() {
                basis[(p, k)] = -x;
            }
        }
    }
    Subspace {
        ambient_dim: n,
        basis,
    }
}

/// Basis of the column space, taken from the pivot columns of `m` itself.
pub fn image_basis(m: &RatMatrix) -> Subspace {
    let (_, pivots) = m.rref();
    Subspace {
        ambient_dim: m.rows(),
        basis: m.select_columns(&pivots),
    }
}

/// Some `x` with `m x = b`, or `None` if the system is inconsistent.
pub fn solve(m: &RatMatrix, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            context: "solve",
            expected: m.rows(),
            found: b.len(),
        });
    }
    let mut aug = m.hstack(&RatMatrix::column_vector(b));
    let pivots = aug.rref_in_place(m.cols());
    let n = m.cols();
    // Inconsistent iff some zero row of the coefficient part carries a nonzero rhs.
    for i in pivots.len()..m.rows() {
        if !aug[(i, n)].is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug[(row, n)].clone();
    }
    Ok(Some(x))
}

/// Solves `m X = B` column by column with a single elimination; `None` if any column fails.
pub fn solve_many(m: &RatMatrix, b: &RatMatrix) -> Result<Option<RatMatrix>> {
    if b.rows() != m.rows() {
        return Err(Error::DimensionMismatch {
            context: "solve_many",
            expected: m.rows(),
            found: b.rows(),
        });
    }
    let n = m.cols();
    let mut aug = m.hstack(b);
    let pivots = aug.rref_in_place(n);
    for i in pivots.len()..m.rows() {
        if (0..b.cols()).any(|j| !aug[(i, n + j)].is_zero()) {
            return Ok(None);
        }
    }
    let mut x = RatMatrix::zeros(n, b.cols());
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x[(p, j)] = aug[(row, n + j)].clone();
        }
    }
    Ok(Some(x))
}

/// A left inverse of a matrix with independent columns.
pub fn left_inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let (_, rows) = m.transpose().rref();
    if rows.len() < m.cols() {
        return None;
    }
    let inv = m.select_rows(&rows).inverse()?;
    let mut out = RatMatrix::zeros(m.cols(), m.rows());
    for (k, &r) in rows.iter().enumerate() {
        for i in 0..m.cols() {
            out[(i, r)] = inv[(i, k)].clone();
        }
    }
    Some(out)
}

/// Like [`quotient_map`], also returning a section `s` with `proj * s = id`.
pub fn quotient_with_section(sub: &Subspace) -> (RatMatrix, RatMatrix) {
    let n = sub.ambient_dim;
    let k = sub.dim();
    let (_, pivots) = sub.basis.transpose().rref();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut full = RatMatrix::zeros(n, n);
    full.set_block(0, 0, &sub.basis);
    let mut c = k;
    for j in 0..n {
        if !is_pivot[j] {
            full[(j, c)] = Rat::one();
            c += 1;
        }
    }
    let inv = full.inverse().expect("completed basis is invertible");
    (
        inv.submatrix(k, 0, n - k, n),
        full.submatrix(0, k, n, n - k),
    )
}

/// A surjection `Q^ambient_dim -> Q^q` whose kernel is exactly `sub`.
///
/// The sub basis is completed by the standard basis vectors at the non-pivot
/// positions of its canonical form; the projection reads off the coordinates
/// along that completion.
pub fn quotient_map(ambient_dim: usize, sub: &Subspace) -> Result<(RatMatrix, usize)> {
    if sub.ambient_dim != ambient_dim {
        return Err(Error::DimensionMismatch {
            context: "quotient_map",
            expected: ambient_dim,
            found: sub.ambient_dim,
        });
    }
    if sub.dim() == 0 {
        return Ok((RatMatrix::identity(ambient_dim), ambient_dim));
    }
    let (proj, _) = quotient_with_section(sub);
    let q = proj.rows();
    Ok((proj, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows)
    }

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| Rat::from_int(x)).collect()
    }

    #[test]
    fn rref_examples() {
        let (r, p) = rref(&RatMatrix::zeros(0, 0));
        assert_eq!(r.shape(), (0, 0));
        assert!(p.is_empty());

        let (r, p) = rref(&RatMatrix::identity(2));
        assert!(r.is_identity());
        assert_eq!(p, vec![0, 1]);

        let (r, p) = rref(&m(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
        assert_eq!(rank(&m(&[&[2, 4], &[1, 2]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&RatMatrix::identity(3)).dim(), 0);
        assert_eq!(kernel_basis(&RatMatrix::zeros(2, 3)).dim(), 3);
        let k = kernel_basis(&m(&[&[1, 2]]));
        assert_eq!(k, Subspace::span_of(2, &[v(&[-2, 1])]));
    }

    #[test]
    fn image_examples() {
        assert_eq!(image_basis(&RatMatrix::zeros(3, 2)).dim(), 0);
        assert_eq!(image_basis(&RatMatrix::identity(3)), Subspace::full(3));
        assert_eq!(image_basis(&m(&[&[1], &[2]])), Subspace::span_of(2, &[v(&[1, 2])]));
    }

    #[test]
    fn solve_examples() {
        let b = v(&[3, -1]);
        assert_eq!(solve(&RatMatrix::identity(2), &b).unwrap(), Some(b));
        let a = m(&[&[1, 1]]);
        let x = solve(&a, &v(&[3])).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x), v(&[3]));
        assert_eq!(solve(&m(&[&[0]]), &v(&[1])).unwrap(), None);
        assert!(solve(&m(&[&[0]]), &v(&[1, 2])).is_err());
    }

    #[test]
    fn quotient_examples() {
        let (p, q) = quotient_map(3, &Subspace::zero(3)).unwrap();
        assert!(p.is_identity());
        assert_eq!(q, 3);

        let (_, q) = quotient_map(2, &Subspace::full(2)).unwrap();
        assert_eq!(q, 0);

        let sub = Subspace::span_of(2, &[v(&[1, 1])]);
        let (p, q) = quotient_map(2, &sub).unwrap();
        assert_eq!(q, 1);
        assert_eq!(p.shape(), (1, 2));
        assert_eq!(p.mul_vec(&v(&[1, 1])), v(&[0]));
        assert_eq!(p.rank(), 1);

        assert!(quotient_map(3, &sub).is_err());
    }

    #[test]
    fn subspace_operations() {
        let a = Subspace::span_of(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span_of(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersect(&b), Subspace::span_of(3, &[v(&[0, 2, 0])]));
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert!(a.contains(&v(&[5, -1, 0])));
        assert!(!a.contains(&v(&[0, 0, 1])));
        let proj = m(&[&[0, 0, 1]]);
        assert_eq!(Subspace::preimage(&proj, &Subspace::zero(1)), a);
    }

    #[test]
    fn left_inverse_and_section() {
        let a = m(&[&[1, 0], &[2, 1], &[0, 3]]);
        let l = left_inverse(&a).unwrap();
        assert!((&l * &a).is_identity());
        assert!(left_inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
        let sub = Subspace::span_of(3, &[v(&[1, 1, 0])]);
        let (p, s) = quotient_with_section(&sub);
        assert!((&p * &s).is_identity());
        assert!((&p * sub.basis()).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
