use std::collections::HashMap;

use super::morphism::{DerivedMorphism, DerivedObject};
use super::{direct_sum, Complex};
use crate::quiver::{ext1, hom_dim, Rep};

/// `X ≅ ⊕_n H^n(X)[−n]`, with both directions of the isomorphism.
#[derive(Clone, Debug)]
pub struct Formality {
    pub pieces: Vec<(i32, Rep)>,
    pub formal: DerivedObject,
    /// `formal → X`.
    pub to_x: DerivedMorphism,
    /// `X → formal`.
    pub from_x: DerivedMorphism,
}

/// The formal complex of the pieces, nested as `((P_0 ⊕ P_1) ⊕ P_2) ⊕ …` in increasing degree.
pub(crate) fn nested_formal(pieces: &[Complex]) -> Complex {
    match pieces {
        [] => unreachable!("at least one piece"),
        [p] => p.clone(),
        [rest @ .., last] => {
            let l = nested_formal(rest);
            direct_sum(l.quiver().clone(), &[l, last.clone()]).0
        }
    }
}

pub fn formality_split(x: &DerivedObject) -> Formality {
    let q = x.quiver().clone();
    let pieces: Vec<(i32, Rep)> = match x.complex().cohomology_range() {
        Some((lo, hi)) => (lo..=hi)
            .map(|n| (n, x.cohomology(n).rep.clone()))
            .filter(|(_, r)| !r.is_zero())
            .collect(),
        None => Vec::new(),
    };
    if pieces.is_empty() {
        let z = DerivedObject::zero(q);
        return Formality {
            pieces,
            formal: z.clone(),
            to_x: DerivedMorphism::zero(&z, x),
            from_x: DerivedMorphism::zero(x, &z),
        };
    }
    let complexes: Vec<Complex> = pieces.iter().map(|(n, r)| Complex::concentrated(r, *n)).collect();
    let formal = DerivedObject::new(nested_formal(&complexes));
    // The term of `formal` in degree n is H^n(X) itself.
    let targets: HashMap<i32, _> = pieces
        .iter()
        .map(|(n, _)| (*n, formal.cohomology(*n).section.clone()))
        .collect();
    let to_x = DerivedMorphism::with_cohomology(&formal, x, &targets)
        .expect("every cohomology map out of a formal complex is realised");
    let from_x = to_x.inverse().expect("quasi-isomorphic on cohomology");
    Formality {
        pieces,
        formal,
        to_x,
        from_x,
    }
}

/// `dim Hom(X, Y[n])` from cohomology alone:
/// `Σ_j dim Hom(H^j X, H^{j+n} Y) + dim Ext¹(H^j X, H^{j+n−1} Y)`.
pub fn hom_dim_formal(x: &Complex, y: &Complex, n: i32) -> usize {
    let Some((lo, hi)) = x.cohomology_range() else {
        return 0;
    };
    (lo..=hi)
        .map(|j| {
            let h = x.cohomology(j).rep;
            let hom = hom_dim(&h, &y.cohomology(j + n).rep).expect("same quiver");
            let ext = ext1(&h, &y.cohomology(j + n - 1).rep).expect("same quiver");
            hom + ext.dim
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{fixture_q1, hom_basis, projective, simple};

    #[test]
    fn formal_split_of_two_term_complex() {
        let q = fixture_q1();
        let su = simple(&q, 0);
        let sv = simple(&q, 1);
        let pu = projective(&q, 0);
        // P_u → S_u has kernel S_v in degree 0 and cokernel 0 in degree 1.
        let f = hom_basis(&pu, &su).unwrap().remove(0);
        let x = Complex::new(q.clone(), 0, vec![pu, su], vec![f]).unwrap();
        let obj = DerivedObject::new(x);
        let fm = formality_split(&obj);
        assert_eq!(fm.pieces.len(), 1);
        assert_eq!(fm.pieces[0].1, sv);
        let id = fm.to_x.compose(&fm.from_x);
        assert!(id.homotopic(&DerivedMorphism::identity(&obj)));
    }
}
