use super::triangle::{triangle_from_exact_pair, Triangle};
use super::{ChainMap, Complex};
use crate::linalg::{image_basis, kernel_basis, left_inverse, RatMatrix};
use crate::quiver::{Rep, RepMap};

/// `τ≤i X` with its inclusion into `X`.
pub fn tau_le(x: &Complex, i: i32) -> (Complex, ChainMap) {
    let q = x.quiver().clone();
    if x.is_zero() || i >= x.hi() {
        return (x.clone(), ChainMap::identity(x));
    }
    if i < x.lo() {
        let z = Complex::zero(q);
        return (z.clone(), ChainMap::zero(&z, x));
    }
    let cycles: Vec<RatMatrix> = (0..q.vertex_count())
        .map(|v| kernel_basis(&x.diff_component(i, v)).basis().clone())
        .collect();
    let (zi, zincl) = x.term(i).subrep(&cycles).expect("cycles form a subrepresentation");
    let mut terms: Vec<Rep> = (x.lo()..i).map(|n| x.term(n)).collect();
    terms.push(zi.clone());
    let mut diffs: Vec<RepMap> = (x.lo()..i - 1).map(|n| x.diff(n)).collect();
    if i > x.lo() {
        let comps = (0..q.vertex_count())
            .map(|v| {
                let l = left_inverse(&cycles[v]).expect("independent");
                &l * &x.diff_component(i - 1, v)
            })
            .collect();
        diffs.push(RepMap::new_unchecked(x.term(i - 1), zi, comps));
    }
    let t = Complex::new_unchecked(q, x.lo(), terms, diffs);
    let comps = t
        .degrees()
        .map(|n| if n < i { RepMap::identity(&x.term(n)) } else { zincl.clone() })
        .collect();
    let incl = ChainMap::new_unchecked(t.clone(), x.clone(), comps);
    (t, incl)
}

/// `τ≥i X` with the projection from `X`.
pub fn tau_ge(x: &Complex, i: i32) -> (Complex, ChainMap) {
    let q = x.quiver().clone();
    if x.is_zero() || i <= x.lo() {
        return (x.clone(), ChainMap::identity(x));
    }
    if i > x.hi() {
        let z = Complex::zero(q);
        return (z.clone(), ChainMap::zero(x, &z));
    }
    let bounds: Vec<_> = (0..q.vertex_count())
        .map(|v| image_basis(&x.diff_component(i - 1, v)))
        .collect();
    let (qi, proj, secs) = x.term(i).quotient(&bounds).expect("boundaries form a subrepresentation");
    let mut terms = vec![qi.clone()];
    terms.extend((i + 1..=x.hi()).map(|n| x.term(n)));
    let mut diffs = Vec::new();
    if i < x.hi() {
        let comps = (0..q.vertex_count())
            .map(|v| &x.diff_component(i, v) * &secs[v])
            .collect();
        diffs.push(RepMap::new_unchecked(qi, x.term(i + 1), comps));
        diffs.extend((i + 1..x.hi()).map(|n| x.diff(n)));
    }
    let t = Complex::new_unchecked(q.clone(), i, terms, diffs);
    let comps = x
        .degrees()
        .map(|n| {
            if n < i || t.is_zero() {
                RepMap::zero(&x.term(n), &t.term(n))
            } else if n == i {
                proj.clone()
            } else {
                RepMap::identity(&x.term(n))
            }
        })
        .collect();
    (t.clone(), ChainMap::new_unchecked(x.clone(), t, comps))
}

/// `τ≤i X → X → τ≥i+1 X → (τ≤i X)[1]`.
pub fn truncation_triangle(x: &Complex, i: i32) -> Triangle {
    let (_, incl) = tau_le(x, i);
    let (_, proj) = tau_ge(x, i + 1);
    triangle_from_exact_pair(&incl, &proj)
}
