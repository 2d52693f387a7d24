//! Weight structures on bounded complexes of representations.
//!
//! Sign conventions: `X[k]` has the weights of `X` raised by `k`, so `S_x[−j]`
//! has weight `wt(x) − j`, and `X ∈ w≤i` iff every `H^j X` lives on vertices of
//! weight `≤ i + j`.

mod decompose;
mod transversality;

use serde::{Deserialize, Serialize};

use crate::derived::Complex;
use crate::error::{Error, Result};
use crate::quiver::{projective_cover, Rep};

pub use decompose::{
    a_adjoint, b_adjoint, extend_to_decompositions, image_condition_check, nice_decompose,
    perturbed_weight_decompose, split_hw_object, weight_decompose, Adjoint, HeartSplit, ImageCheck,
    TriangleMorphism,
};
pub use transversality::{
    check_transversality, orthogonality_table, CheckBudget, ConditionVerdict, OrthogonalityEntry,
    TransversalityReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Weights read off the vertex filtration of an admissible quiver.
    Transversal,
    /// `w≤i` = complexes of projectives homotopic to ones supported in degrees `≥ −i`.
    StupidOnProj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Le,
    Ge,
}

/// Minimal `[lo, hi]` with `X ∈ w≥lo ∩ w≤hi`; `None` for `X ≅ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeightRange {
    pub lo: i32,
    pub hi: i32,
}

pub(crate) fn require_admissible(x: &Complex) -> Result<()> {
    let q = x.quiver();
    if let Some(a) = q
        .arrows()
        .iter()
        .find(|a| q.weight(a.target) >= q.weight(a.source))
    {
        return Err(Error::NotAdmissible(a.id.clone()));
    }
    Ok(())
}

pub fn is_projective(m: &Rep) -> bool {
    projective_cover(m).is_iso()
}

pub(crate) fn require_projective(x: &Complex) -> Result<()> {
    match x.degrees().find(|&n| !is_projective(&x.term(n))) {
        Some(n) => Err(Error::NotProjective(n)),
        None => Ok(()),
    }
}

/// Support of the minimal projective model: `H^j` contributes degree `j`, and `j − 1`
/// when it is not projective.
fn minimal_projective_support(x: &Complex) -> Option<(i32, i32)> {
    let (lo, hi) = x.cohomology_range()?;
    let mut bottom = i32::MAX;
    let mut top = i32::MIN;
    for j in lo..=hi {
        let h = x.cohomology(j).rep;
        if h.is_zero() {
            continue;
        }
        top = top.max(j);
        bottom = bottom.min(if is_projective(&h) { j } else { j - 1 });
    }
    Some((bottom, top))
}

pub fn weight_range(x: &Complex, mode: Mode) -> Result<Option<WeightRange>> {
    match mode {
        Mode::Transversal => {
            require_admissible(x)?;
            let Some((lo, hi)) = x.cohomology_range() else {
                return Ok(None);
            };
            let mut r: Option<WeightRange> = None;
            for j in lo..=hi {
                let ws = x.cohomology(j).rep.support_weights();
                let (Some(&a), Some(&b)) = (ws.first(), ws.last()) else {
                    continue;
                };
                let (a, b) = (a - j, b - j);
                r = Some(match r {
                    Some(w) => WeightRange {
                        lo: w.lo.min(a),
                        hi: w.hi.max(b),
                    },
                    None => WeightRange { lo: a, hi: b },
                });
            }
            Ok(r)
        }
        Mode::StupidOnProj => {
            require_projective(x)?;
            Ok(minimal_projective_support(x).map(|(b, t)| WeightRange { lo: -t, hi: -b }))
        }
    }
}

pub fn membership_w(x: &Complex, i: i32, side: Side, mode: Mode) -> Result<bool> {
    Ok(match weight_range(x, mode)? {
        None => true,
        Some(r) => match side {
            Side::Le => r.hi <= i,
            Side::Ge => r.lo >= i,
        },
    })
}

/// The triangulated filtration `𝒞_{≤i}`: all cohomology supported on weights `≤ i`.
pub fn in_c_le(x: &Complex, i: i32) -> bool {
    match x.cohomology_range() {
        None => true,
        Some((lo, hi)) => (lo..=hi).all(|j| {
            x.cohomology(j)
                .rep
                .support_weights()
                .last()
                .is_none_or(|&w| w <= i)
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::direct_sum;
    use crate::quiver::{fixture_q0, fixture_q1, hom_basis, projective, simple};

    #[test]
    fn membership_examples() {
        let q = fixture_q1();
        let pu = Complex::concentrated(&projective(&q, 0), 0);
        let t = Mode::Transversal;
        assert!(membership_w(&pu, 1, Side::Le, t).unwrap());
        assert!(!membership_w(&pu, 0, Side::Le, t).unwrap());
        let z = Complex::zero(q.clone());
        assert!(membership_w(&z, -9, Side::Le, t).unwrap());
        assert!(membership_w(&z, 9, Side::Ge, t).unwrap());
        let sv = Complex::concentrated(&simple(&q, 1), 0);
        let su1 = Complex::concentrated(&simple(&q, 0), 1);
        let x = direct_sum(q.clone(), &[sv, su1]).0;
        assert!(membership_w(&x, 0, Side::Le, t).unwrap());
        assert!(membership_w(&x, 0, Side::Ge, t).unwrap());
    }

    #[test]
    fn shift_raises_weight() {
        let q = fixture_q1();
        let pu = Complex::concentrated(&projective(&q, 0), 0);
        for k in -2..=2 {
            for i in -3..=3 {
                for side in [Side::Le, Side::Ge] {
                    assert_eq!(
                        membership_w(&pu.shift(k), i, side, Mode::Transversal).unwrap(),
                        membership_w(&pu, i - k, side, Mode::Transversal).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn stupid_ranges() {
        let q = fixture_q0();
        let pv = projective(&q, 1);
        let pu = projective(&q, 0);
        let d = hom_basis(&pv, &pu).unwrap().remove(0);
        let x = Complex::new(q.clone(), 0, vec![pv, pu.clone()], vec![d]).unwrap();
        let r = weight_range(&x, Mode::StupidOnProj).unwrap().unwrap();
        assert_eq!((r.lo, r.hi), (-1, 0));
        let five = Complex::concentrated(&pu, 5);
        let r = weight_range(&five, Mode::StupidOnProj).unwrap().unwrap();
        assert_eq!((r.lo, r.hi), (-5, -5));
        let s = Complex::concentrated(&simple(&q, 0), 0);
        assert_eq!(weight_range(&s, Mode::StupidOnProj), Err(Error::NotProjective(0)));
        assert!(matches!(
            weight_range(&s, Mode::Transversal),
            Err(Error::NotAdmissible(_))
        ));
    }
}
