//! Random quivers, representations and complexes for property tests.

use std::sync::Arc;

use rand::Rng;

use crate::derived::{ChainMap, Complex};
use crate::linalg::{kernel_basis, Rat, RatMatrix};
use crate::quiver::{hom_basis, projective, Rep, RepMap, WeightedQuiver};

#[derive(Clone, Copy, Debug)]
pub struct QuiverShape {
    pub max_vertices: usize,
    pub weight_bound: i32,
    pub arrow_prob: f64,
    /// Only arrows that strictly decrease weight.
    pub admissible: bool,
}

impl Default for QuiverShape {
    fn default() -> Self {
        QuiverShape {
            max_vertices: 4,
            weight_bound: 3,
            arrow_prob: 0.5,
            admissible: true,
        }
    }
}

pub fn random_quiver<R: Rng>(rng: &mut R, shape: QuiverShape) -> Arc<WeightedQuiver> {
    let n = rng.gen_range(1..=shape.max_vertices);
    let b = shape.weight_bound;
    let weights: Vec<i32> = (0..n).map(|_| rng.gen_range(-b..=b)).collect();
    let mut arrows = Vec::new();
    for s in 0..n {
        for t in 0..n {
            let allowed = if shape.admissible {
                weights[t] < weights[s]
            } else {
                s < t
            };
            if allowed && rng.gen_bool(shape.arrow_prob) {
                let k = if rng.gen_bool(0.15) { 2 } else { 1 };
                for _ in 0..k {
                    arrows.push((
                        format!("a{}", arrows.len()),
                        format!("x{s}"),
                        format!("x{t}"),
                    ));
                }
            }
        }
    }
    let vertices = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| (format!("x{i}"), w))
        .collect();
    WeightedQuiver::new(vertices, arrows)
        .expect("generated quivers are acyclic")
        .into_arc()
}

pub fn small_rat<R: Rng>(rng: &mut R) -> Rat {
    Rat::from_int(rng.gen_range(-2..=2))
}

pub fn random_rep<R: Rng>(rng: &mut R, q: &Arc<WeightedQuiver>, max_dim: usize) -> Rep {
    let dims: Vec<usize> = (0..q.vertex_count())
        .map(|_| rng.gen_range(0..=max_dim))
        .collect();
    let mats = q
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.target], dims[a.source]);
            RatMatrix::from_vec(r, c, (0..r * c).map(|_| small_rat(rng)).collect())
        })
        .collect();
    Rep::new(q.clone(), dims, mats).expect("shapes match")
}

/// A random intertwiner, sampled from the solution space of the intertwining equations.
pub fn random_rep_map<R: Rng>(rng: &mut R, m: &Rep, n: &Rep) -> RepMap {
    hom_basis(m, n)
        .expect("same quiver")
        .iter()
        .fold(RepMap::zero(m, n), |acc, b| acc.add(&b.scale(&small_rat(rng))))
}

pub fn random_projective_rep<R: Rng>(rng: &mut R, q: &Arc<WeightedQuiver>, max_summands: usize) -> Rep {
    let k = rng.gen_range(0..=max_summands);
    let parts: Vec<Rep> = (0..k)
        .map(|_| projective(q, rng.gen_range(0..q.vertex_count())))
        .collect();
    Rep::sum_of(q.clone(), &parts).0
}

/// Builds a complex in degrees `lo..lo+len` from the given terms, sampling each
/// differential among maps that vanish on the image of the previous one.
pub fn complex_from_terms<R: Rng>(rng: &mut R, q: &Arc<WeightedQuiver>, lo: i32, terms: Vec<Rep>) -> Complex {
    let mut diffs: Vec<RepMap> = Vec::new();
    for k in 0..terms.len().saturating_sub(1) {
        let d = match diffs.last() {
            None => random_rep_map(rng, &terms[k], &terms[k + 1]),
            Some(prev) => {
                let (c, pr) = prev.cokernel();
                random_rep_map(rng, &c, &terms[k + 1]).compose(&pr)
            }
        };
        diffs.push(d);
    }
    if terms.is_empty() {
        return Complex::zero(q.clone());
    }
    Complex::new(q.clone(), lo, terms, diffs).expect("d∘d = 0 by construction")
}

pub fn random_complex<R: Rng>(rng: &mut R, q: &Arc<WeightedQuiver>, max_len: usize, max_dim: usize) -> Complex {
    let len = rng.gen_range(1..=max_len);
    let lo = rng.gen_range(-2..=1);
    let terms = (0..len).map(|_| random_rep(rng, q, max_dim)).collect();
    complex_from_terms(rng, q, lo, terms)
}

pub fn random_projective_complex<R: Rng>(rng: &mut R, q: &Arc<WeightedQuiver>, max_len: usize, max_summands: usize) -> Complex {
    let len = rng.gen_range(1..=max_len);
    let lo = rng.gen_range(-2..=1);
    let terms = (0..len).map(|_| random_projective_rep(rng, q, max_summands)).collect();
    complex_from_terms(rng, q, lo, terms)
}

/// A random module placed in degree 0.
pub fn random_module_complex<R: Rng>(rng: &mut R, q: &Arc<WeightedQuiver>, max_dim: usize) -> Complex {
    Complex::concentrated(&random_rep(rng, q, max_dim), 0)
}

/// A random honest chain map `X → Y`, sampled from the kernel of the linear
/// constraints (intertwining in each degree, commuting with differentials).
pub fn random_chain_map<R: Rng>(rng: &mut R, x: &Complex, y: &Complex) -> ChainMap {
    let q = x.quiver();
    let nv = q.vertex_count();
    let degrees: Vec<i32> = x.degrees().collect();
    // Unknown block for (degree, vertex): entries of f^n_v, row-major.
    let mut offset = std::collections::HashMap::new();
    let mut total = 0;
    for &n in &degrees {
        for v in 0..nv {
            offset.insert((n, v), total);
            total += y.term(n).dim(v) * x.term(n).dim(v);
        }
    }
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    // A·F·B as rows over the entries of F (r × c).
    let mut push = |terms: &[(usize, usize, usize, &RatMatrix, &RatMatrix, Rat)]| {
        let (ar, bc) = (terms[0].3.rows(), terms[0].4.cols());
        for i in 0..ar {
            for j in 0..bc {
                let mut row = vec![Rat::zero(); total];
                for &(off, r, c, a, b, ref sign) in terms {
                    for k in 0..r {
                        for l in 0..c {
                            let coeff = &(&a[(i, k)] * &b[(l, j)]) * sign;
                            if !coeff.is_zero() {
                                row[off + k * c + l] += &coeff;
                            }
                        }
                    }
                }
                rows.push(row);
            }
        }
    };
    for &n in &degrees {
        let (xn, yn) = (x.term(n), y.term(n));
        for (ai, a) in q.arrows().iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let (os, ot) = (offset[&(n, s)], offset[&(n, t)]);
            let id_xs = RatMatrix::identity(xn.dim(s));
            let id_yt = RatMatrix::identity(yn.dim(t));
            // f_t M_a − N_a f_s = 0
            push(&[
                (ot, yn.dim(t), xn.dim(t), &id_yt, xn.matrix(ai), Rat::one()),
                (os, yn.dim(s), xn.dim(s), yn.matrix(ai), &id_xs, -Rat::one()),
            ]);
        }
        for v in 0..nv {
            let dy = y.diff_component(n, v);
            let dx = x.diff_component(n, v);
            let id_x = RatMatrix::identity(xn.dim(v));
            let y1 = y.term(n + 1).dim(v);
            let id_y1 = RatMatrix::identity(y1);
            // d_Y f^n − f^{n+1} d_X = 0
            let mut terms = vec![(offset[&(n, v)], yn.dim(v), xn.dim(v), &dy, &id_x, Rat::one())];
            if let Some(&o1) = offset.get(&(n + 1, v)) {
                terms.push((o1, y1, x.term(n + 1).dim(v), &id_y1, &dx, -Rat::one()));
            }
            if dy.rows() > 0 && id_x.cols() > 0 {
                push(&terms);
            }
            // f^{n−1} lands in degree n; when n−1 is outside X the constraint is d_Y f^{lo−1}=0, vacuous.
        }
    }
    let cst = RatMatrix::from_rows(rows, total);
    let ker = kernel_basis(&cst);
    let mut v = vec![Rat::zero(); total];
    for b in ker.basis_vectors() {
        let c = small_rat(rng);
        for (a, e) in v.iter_mut().zip(&b) {
            *a += &(&c * e);
        }
    }
    let comps = degrees
        .iter()
        .map(|&n| {
            let mats = (0..nv)
                .map(|u| {
                    let (r, c) = (y.term(n).dim(u), x.term(n).dim(u));
                    let o = offset[&(n, u)];
                    RatMatrix::from_vec(r, c, v[o..o + r * c].to_vec())
                })
                .collect();
            RepMap::new_unchecked(x.term(n), y.term(n), mats)
        })
        .collect();
    ChainMap::new(x.clone(), y.clone(), comps).expect("sampled from the chain-map constraints")
}
