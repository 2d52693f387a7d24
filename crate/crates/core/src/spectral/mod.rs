//! Weight spectral sequences, weight filtrations on cohomology, and `K_0`.

mod couple;
mod heart;
mod k0;
mod pages;
mod tower;

use serde::{Deserialize, Serialize};

use crate::derived::{DerivedMorphism, DerivedObject, Triangle};
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::weight::{weight_decompose, Mode};

pub use heart::{
    epimorphism_criterion, gr_heart, heart_filtration_from_degeneration, GrWitness,
    HeartFiltration,
};
pub use k0::{k0_class, k0_check_triangle, K0Class};
pub use pages::{Page, PageEntry, SpecSeq};
pub use tower::{build_perturbed_tower, build_tower, tower_from_decompositions, Tower};

/// Which homological functor is fed the weight tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomFunctor {
    /// Cohomology as representations, recorded per vertex.
    THomology,
    /// Total dimension of cohomology.
    TotalDim,
    /// Dimension of cohomology at one vertex.
    DimAtVertex(usize),
}

impl HomFunctor {
    fn values(&self, per_vertex: &[usize]) -> Vec<usize> {
        match self {
            HomFunctor::THomology => per_vertex.to_vec(),
            _ => vec![per_vertex.iter().sum()],
        }
    }

    fn check(&self, x: &DerivedObject) -> Result<()> {
        match *self {
            HomFunctor::DimAtVertex(v) if v >= x.quiver().vertex_count() => {
                Err(Error::UnknownVertex(format!("#{v}")))
            }
            _ => Ok(()),
        }
    }
}

/// The spectral sequence of a given tower.
pub fn run_ss_on_tower(h: HomFunctor, tower: &Tower) -> Result<SpecSeq> {
    h.check(&tower.object)?;
    let couples = couple::Couple::of_tower(tower);
    Ok(pages::run_couples(h, tower, &couples))
}

/// The weight spectral sequence of `X` for the canonical tower.
pub fn run_ss(h: HomFunctor, x: &DerivedObject, mode: Mode) -> Result<SpecSeq> {
    run_ss_on_tower(h, &build_tower(x, mode)?)
}

pub fn degenerates_at_e2(h: HomFunctor, x: &DerivedObject, mode: Mode) -> Result<bool> {
    Ok(run_ss(h, x, mode)?.degenerates_at_e2)
}

/// `Im(H^n(A) → H^n(X))` per vertex for a decomposition `A → X → B → A[1]`.
pub fn filtration_from_triangle(t: &Triangle, n: i32) -> Vec<Subspace> {
    t.u.cohomology(n).iter().map(Subspace::span).collect()
}

/// `W_i H^n(X) = Im(H^n(w≤i X) → H^n(X))`, canonical choice.
pub fn weight_filtration_homology(
    x: &DerivedObject,
    n: i32,
    i: i32,
    mode: Mode,
) -> Result<Vec<Subspace>> {
    Ok(filtration_from_triangle(&weight_decompose(x, i, mode)?, n))
}

/// `H^n(f)(W_i H^n X) = W_i H^n Y ∩ Im H^n(f)` at every vertex.
///
/// Only claimed when both spectral sequences degenerate at `E_2`; otherwise
/// [`Error::NotDegenerate`].
pub fn strictness_check(f: &DerivedMorphism, n: i32, i: i32, mode: Mode) -> Result<bool> {
    for (name, o) in [("source", f.source()), ("target", f.target())] {
        if !degenerates_at_e2(HomFunctor::THomology, o, mode)? {
            return Err(Error::NotDegenerate(name.into()));
        }
    }
    let wx = weight_filtration_homology(f.source(), n, i, mode)?;
    let wy = weight_filtration_homology(f.target(), n, i, mode)?;
    let hf = f.cohomology(n);
    Ok(hf.iter().zip(wx.iter().zip(&wy)).all(|(m, (a, b))| {
        a.map(m) == b.intersect(&Subspace::span(m))
    }))
}
