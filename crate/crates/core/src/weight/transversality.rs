use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::decompose::{image_condition_check, nice_decompose};
use super::{membership_w, Mode, Side};
use crate::derived::{hom_derived_dim, Complex, DerivedObject};
use crate::error::Error;
use crate::linalg::RatMatrix;
use crate::quiver::{
    ext1, hom_dim, is_semisimple_slice, projective, simple, w_le_module_candidate, Rep,
    SliceWitness, WeightedQuiver,
};
use crate::random::random_rep;

#[derive(Clone, Copy, Debug)]
pub struct CheckBudget {
    /// Random modules added to the simples and projectives for the sampled conditions.
    pub samples: usize,
    pub seed: u64,
    pub max_dim: usize,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget {
            samples: 4,
            seed: 0,
            max_dim: 2,
        }
    }
}

/// `dim Hom(S_x, S_y[s])` for one pair of simples and one shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityEntry {
    pub from: String,
    pub from_weight: i32,
    pub to: String,
    pub to_weight: i32,
    pub shift: i32,
    pub dim: usize,
    pub must_vanish: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub name: String,
    pub holds: bool,
    /// Checked on generated objects only.
    pub sampled: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceVerdict {
    pub weight: i32,
    pub semisimple: bool,
    pub witness: Option<SliceWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransversalityReport {
    pub admissible: bool,
    pub shift_window: (i32, i32),
    /// Nonzero entries of the table; every other entry in the window is zero.
    pub nonzero_entries: Vec<OrthogonalityEntry>,
    pub entries_checked: usize,
    pub slices: Vec<SliceVerdict>,
    pub conditions: Vec<ConditionVerdict>,
    /// The family verdict agrees with every sampled equivalent condition.
    pub conditions_agree: bool,
    pub overall: bool,
}

impl TransversalityReport {
    pub fn condition(&self, name: &str) -> Option<&ConditionVerdict> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn violations(&self) -> impl Iterator<Item = &OrthogonalityEntry> {
        self.nonzero_entries.iter().filter(|e| e.must_vanish)
    }
}

/// Whether the family of slices requires `Hom(𝒜_i, 𝒜_j[s]) = 0`.
pub fn must_vanish(i: i32, j: i32, s: i32) -> bool {
    s < 0 || s > i - j || (s == 0 && i > j)
}

/// The table `dim Hom(S_x, S_y[s])` over all simples and `s` in the window.
pub fn orthogonality_table(q: &Arc<WeightedQuiver>) -> ((i32, i32), Vec<OrthogonalityEntry>, usize) {
    let Some((lo, hi)) = q.weight_range() else {
        return ((0, 0), Vec::new(), 0);
    };
    let window = (lo - hi - 2, hi - lo + 2);
    let simples: Vec<DerivedObject> = (0..q.vertex_count())
        .map(|v| DerivedObject::new(Complex::concentrated(&simple(q, v), 0)))
        .collect();
    let mut entries = Vec::new();
    let mut checked = 0;
    for x in 0..q.vertex_count() {
        for y in 0..q.vertex_count() {
            for s in window.0..=window.1 {
                checked += 1;
                let dim = hom_derived_dim(&simples[x], &simples[y], s);
                if dim > 0 {
                    let (i, j) = (q.weight(x), q.weight(y));
                    entries.push(OrthogonalityEntry {
                        from: q.vertex_id(x).to_string(),
                        from_weight: i,
                        to: q.vertex_id(y).to_string(),
                        to_weight: j,
                        shift: s,
                        dim,
                        must_vanish: must_vanish(i, j, s),
                    });
                }
            }
        }
    }
    (window, entries, checked)
}

fn verdict(name: &str, holds: bool, sampled: bool, detail: impl Into<String>) -> ConditionVerdict {
    ConditionVerdict {
        name: name.to_string(),
        holds,
        sampled,
        detail: detail.into(),
    }
}

/// Heart objects used by the sampled conditions: simples, projectives, random modules.
fn sample_modules(q: &Arc<WeightedQuiver>, budget: &CheckBudget) -> Vec<Rep> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut out: Vec<Rep> = (0..q.vertex_count()).map(|v| simple(q, v)).collect();
    out.extend((0..q.vertex_count()).map(|v| projective(q, v)));
    out.extend((0..budget.samples).map(|_| random_rep(&mut rng, q, budget.max_dim)));
    out
}

/// Candidate nice decomposition of `M` at level `i` from the vertex filtration.
struct Candidate {
    level: i32,
    sub: Rep,
    quot: Rep,
}

/// Candidate decompositions are weight decompositions only if
/// `Hom(W_{≤i}M, (N/W_{≤i'}N)[s]) = 0` whenever `s ≥ i − i'`; only `s ∈ {0, 1}` can be nonzero.
fn candidate_orthogonality(cands: &[Candidate]) -> Option<String> {
    for a in cands {
        for c in cands {
            for s in (a.level - c.level).max(0)..=1 {
                let d = if s == 0 {
                    hom_dim(&a.sub, &c.quot).expect("same quiver")
                } else {
                    ext1(&a.sub, &c.quot).expect("same quiver").dim
                };
                if d > 0 {
                    return Some(format!(
                        "Hom(W<={} piece, quotient above {} [{}]) has dimension {}",
                        a.level, c.level, s, d
                    ));
                }
            }
        }
    }
    None
}

/// Runs every check of the equivalence theorem that is decidable on `q`.
pub fn check_transversality(q: &Arc<WeightedQuiver>, budget: CheckBudget) -> TransversalityReport {
    let admissible = q.is_admissible();
    let (window, nonzero_entries, entries_checked) = orthogonality_table(q);
    let mut conditions = Vec::new();

    let bad: Vec<&OrthogonalityEntry> = nonzero_entries.iter().filter(|e| e.must_vanish).collect();
    conditions.push(verdict(
        "strong_semi_orthogonality",
        bad.is_empty(),
        false,
        match bad.first() {
            Some(e) => format!(
                "Hom(S_{}, S_{}[{}]) = {} with weights {} and {}",
                e.from, e.to, e.shift, e.dim, e.from_weight, e.to_weight
            ),
            None => format!("{entries_checked} entries, shifts {}..{}", window.0, window.1),
        },
    ));

    let mut weights = q.weights();
    weights.sort_unstable();
    weights.dedup();
    let slices: Vec<SliceVerdict> = weights
        .iter()
        .map(|&w| {
            let (semisimple, witness) = is_semisimple_slice(q, w);
            SliceVerdict {
                weight: w,
                semisimple,
                witness,
            }
        })
        .collect();
    let first_bad = slices.iter().find(|s| !s.semisimple);
    conditions.push(verdict(
        "semisimple_slices",
        first_bad.is_none(),
        false,
        match first_bad.and_then(|s| s.witness.as_ref()) {
            Some(w) => format!("Ext^1(S_{}, S_{}) = {} at weight {}", w.from, w.to, w.ext_dim, first_bad.unwrap().weight),
            None => format!("{} slices", slices.len()),
        },
    ));

    // Classes of slice simples in K0, as dimension vectors.
    let n = q.vertex_count();
    let cols: Vec<Vec<_>> = (0..n)
        .map(|v| simple(q, v).dims().iter().map(|&d| crate::linalg::Rat::from_int(d as i64)).collect())
        .collect();
    let rank = RatMatrix::from_columns(n, &cols).rank();
    conditions.push(verdict(
        "generation",
        rank == n,
        false,
        format!("K0 rank {rank} of {n}"),
    ));

    let modules = sample_modules(q, &budget);
    let levels: Vec<i32> = match q.weight_range() {
        Some((lo, hi)) => (lo - 1..=hi).collect(),
        None => Vec::new(),
    };
    let mut cands = Vec::new();
    let mut filt_err = None;
    'outer: for m in &modules {
        for &i in &levels {
            match w_le_module_candidate(m, i) {
                Ok((sub, inc)) => cands.push(Candidate {
                    level: i,
                    sub,
                    quot: inc.cokernel().0,
                }),
                Err(Error::NotFiltered(a)) => {
                    filt_err = Some(format!("vertex filtration is not by subobjects (arrow {a})"));
                    break 'outer;
                }
                Err(e) => {
                    filt_err = Some(e.to_string());
                    break 'outer;
                }
            }
        }
    }
    let orth = match &filt_err {
        Some(e) => Some(e.clone()),
        None => candidate_orthogonality(&cands),
    };

    // Nice decompositions: the candidate triangles must be weight decompositions.
    let mut nice = orth.clone();
    if nice.is_none() && admissible {
        'nice: for m in &modules {
            for &i in &levels {
                let ok = nice_decompose(m, i).is_ok_and(|t| {
                    membership_w(t.a.complex(), i, Side::Le, Mode::Transversal).unwrap_or(false)
                        && membership_w(t.c.complex(), i + 1, Side::Ge, Mode::Transversal)
                            .unwrap_or(false)
                });
                if !ok {
                    nice = Some(format!("nice decomposition failed at level {i}"));
                    break 'nice;
                }
            }
        }
    }
    conditions.push(verdict(
        "nice_decompositions",
        nice.is_none(),
        true,
        nice.unwrap_or_else(|| format!("{} modules x {} levels", modules.len(), levels.len())),
    ));

    // Image condition: randomized choices of w≤i X for heart objects.
    let mut image = orth;
    if image.is_none() && admissible {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x5eed);
        'img: for m in &modules {
            let x = DerivedObject::new(Complex::concentrated(m, 0));
            for &i in &levels {
                match image_condition_check(&x, i, &mut rng) {
                    Ok(c) if c.holds && c.matches_filtration => {}
                    Ok(_) => {
                        image = Some(format!("image condition fails at level {i}"));
                        break 'img;
                    }
                    Err(e) => {
                        image = Some(e.to_string());
                        break 'img;
                    }
                }
            }
        }
    }
    conditions.push(verdict(
        "image_condition",
        image.is_none(),
        true,
        image.unwrap_or_else(|| format!("{} modules x {} levels", modules.len(), levels.len())),
    ));

    // The generating family condition is the conjunction of the first three verdicts.
    let family = conditions[..3].iter().all(|c| c.holds);
    let conditions_agree = conditions[3..].iter().all(|c| c.holds == family);
    let overall = conditions.iter().all(|c| c.holds);
    TransversalityReport {
        admissible,
        shift_window: window,
        nonzero_entries,
        entries_checked,
        slices,
        conditions,
        conditions_agree,
        overall,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{fixture_q0, fixture_q1};

    #[test]
    fn fixture_verdicts() {
        let r = check_transversality(&fixture_q1(), CheckBudget::default());
        assert!(r.overall && r.conditions_agree);
        assert_eq!(r.nonzero_entries.len(), 3);
        let ext: Vec<_> = r.nonzero_entries.iter().filter(|e| e.from != e.to).collect();
        assert_eq!(ext.len(), 1);
        assert_eq!((ext[0].from.as_str(), ext[0].to.as_str(), ext[0].shift, ext[0].dim), ("u", "v", 1, 1));

        let r = check_transversality(&fixture_q0(), CheckBudget::default());
        assert!(!r.overall && r.conditions_agree);
        let w = r.slices[0].witness.as_ref().unwrap();
        assert_eq!((w.from.as_str(), w.to.as_str(), w.ext_dim), ("u", "v", 1));
    }

    #[test]
    fn arrowless_quiver_is_transversal() {
        let q = WeightedQuiver::from_parts(&[("a", 2), ("b", -1), ("c", 2)], &[])
            .unwrap()
            .into_arc();
        assert!(check_transversality(&q, CheckBudget::default()).overall);
    }
}
