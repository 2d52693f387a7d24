use std::sync::Arc;

use serde::Serialize;

use super::{ext1, simple, Rep, RepMap, WeightedQuiver};
use crate::error::{Error, Result};
use crate::linalg::{left_inverse, RatMatrix, Subspace};

fn support_bases(m: &Rep, i: i32) -> Vec<RatMatrix> {
    let q = m.quiver();
    (0..q.vertex_count())
        .map(|x| {
            let d = m.dim(x);
            if q.weight(x) <= i {
                RatMatrix::identity(d)
            } else {
                RatMatrix::zeros(d, 0)
            }
        })
        .collect()
}

/// `W_{≤i}M`: the full vertex spaces at weights `≤ i`, with its inclusion.
pub fn w_le_module(m: &Rep, i: i32) -> Result<(Rep, RepMap)> {
    let q = m.quiver();
    if let Some(a) = q
        .arrows()
        .iter()
        .find(|a| q.weight(a.target) >= q.weight(a.source))
    {
        return Err(Error::NotAdmissible(a.id.clone()));
    }
    Ok(m.subrep(&support_bases(m, i)).expect("admissible quivers filter"))
}

/// Vertex-support truncation on any quiver where it happens to be a subrepresentation of `m`.
pub fn w_le_module_candidate(m: &Rep, i: i32) -> Result<(Rep, RepMap)> {
    m.subrep(&support_bases(m, i)).map_err(|e| match e {
        Error::NotIntertwiner(a) => Error::NotFiltered(a),
        other => other,
    })
}

/// `W_{≤i}M / W_{≤i−1}M`.
pub fn gr_module(m: &Rep, i: i32) -> Result<Rep> {
    let (top, _) = w_le_module(m, i)?;
    let q = m.quiver();
    let subs: Vec<Subspace> = (0..q.vertex_count())
        .map(|x| {
            if q.weight(x) < i {
                Subspace::full(top.dim(x))
            } else {
                Subspace::zero(top.dim(x))
            }
        })
        .collect();
    Ok(top.quotient(&subs)?.0)
}

/// Splits an idempotent endomorphism through its image.
pub fn split_idempotent_module(m: &Rep, e: &RepMap) -> Result<(Rep, RepMap, RepMap)> {
    if e.source() != m || e.target() != m || e.compose(e) != *e {
        return Err(Error::NotIdempotent);
    }
    let (y, incl) = e.image();
    let comps = (0..m.quiver().vertex_count())
        .map(|x| {
            let l = left_inverse(incl.component(x)).expect("image basis is independent");
            &l * e.component(x)
        })
        .collect();
    let proj = RepMap::new_unchecked(m.clone(), y.clone(), comps);
    Ok((y, incl, proj))
}

/// Why a weight slice fails to be semisimple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceWitness {
    pub from: String,
    pub to: String,
    pub ext_dim: usize,
    pub arrow: Option<String>,
}

/// Whether the slice of weight-`i` simples has no self-extensions.
pub fn is_semisimple_slice(q: &Arc<WeightedQuiver>, i: i32) -> (bool, Option<SliceWitness>) {
    let vs = q.vertices_of_weight(i);
    for &x in &vs {
        for &y in &vs {
            let d = ext1(&simple(q, x), &simple(q, y)).expect("same quiver").dim;
            if d > 0 {
                let arrow = q
                    .arrows()
                    .iter()
                    .find(|a| a.source == x && a.target == y)
                    .map(|a| a.id.clone());
                return (
                    false,
                    Some(SliceWitness {
                        from: q.vertex_id(x).to_string(),
                        to: q.vertex_id(y).to_string(),
                        ext_dim: d,
                        arrow,
                    }),
                );
            }
        }
    }
    (true, None)
}

#[cfg(test)]
mod tests {
    use super::super::{fixture_q0, fixture_q1, projective};
    use super::*;

    #[test]
    fn w_le_examples() {
        let q = fixture_q1();
        let pu = projective(&q, 0);
        let (w0, inc) = w_le_module(&pu, 0).unwrap();
        assert_eq!(w0, simple(&q, 1));
        assert!(inc.is_injective());
        assert_eq!(w_le_module(&pu, 1).unwrap().0, pu);
        assert!(w_le_module(&pu, -1).unwrap().0.is_zero());
        assert!(matches!(
            w_le_module(&projective(&fixture_q0(), 0), 0),
            Err(Error::NotAdmissible(_))
        ));
    }

    #[test]
    fn gr_examples() {
        let q = fixture_q1();
        let pu = projective(&q, 0);
        assert_eq!(gr_module(&pu, 1).unwrap(), simple(&q, 0));
        assert_eq!(gr_module(&pu, 0).unwrap(), simple(&q, 1));
        assert!(gr_module(&pu, 5).unwrap().is_zero());
        assert_eq!(gr_module(&simple(&q, 1), 0).unwrap(), simple(&q, 1));
    }

    #[test]
    fn candidate_filtration_on_q0() {
        let q = fixture_q0();
        let pu = projective(&q, 0);
        assert_eq!(w_le_module_candidate(&pu, 0).unwrap().0, pu);
        let bad = WeightedQuiver::from_parts(&[("u", 0), ("v", 1)], &[("a", "u", "v")])
            .unwrap()
            .into_arc();
        assert!(matches!(
            w_le_module_candidate(&projective(&bad, 0), 0),
            Err(Error::NotFiltered(_))
        ));
    }

    #[test]
    fn idempotent_splitting() {
        let q = fixture_q1();
        let (su, sv) = (simple(&q, 0), simple(&q, 1));
        let m = su.direct_sum(&sv);
        let (y, inc, pr) = split_idempotent_module(&m, &RepMap::identity(&m)).unwrap();
        assert_eq!(y.dims(), m.dims());
        assert!(pr.compose(&inc).is_identity());
        let (y, _, _) = split_idempotent_module(&m, &RepMap::zero(&m, &m)).unwrap();
        assert!(y.is_zero());
        let e = RepMap::new(
            m.clone(),
            m.clone(),
            vec![RatMatrix::identity(1), RatMatrix::zeros(1, 1)],
        )
        .unwrap();
        let (y, inc, pr) = split_idempotent_module(&m, &e).unwrap();
        assert_eq!(y, su);
        assert_eq!(inc.compose(&pr), e);
        let not = RepMap::identity(&m).scale(&crate::linalg::Rat::from_int(2));
        assert!(matches!(
            split_idempotent_module(&m, &not),
            Err(Error::NotIdempotent)
        ));
    }

    #[test]
    fn slice_semisimplicity() {
        assert_eq!(is_semisimple_slice(&fixture_q1(), 0), (true, None));
        let (ok, w) = is_semisimple_slice(&fixture_q0(), 0);
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!((w.from.as_str(), w.to.as_str(), w.ext_dim), ("u", "v", 1));
        assert_eq!(is_semisimple_slice(&fixture_q1(), 7), (true, None));
    }
}
