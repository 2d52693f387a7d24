//! Randomized run of the invariant suite.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use weightforge::weight::{CheckBudget, Mode};

use crate::checks::{self, Check, Scale};

#[derive(Clone, Debug, Default, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    /// First failure: case index and message.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<(usize, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestResult {
    pub seed: u64,
    pub cases: usize,
    pub invariants: BTreeMap<&'static str, Tally>,
}

impl SelftestResult {
    pub fn all_pass(&self) -> bool {
        self.invariants.values().all(|t| t.fail == 0)
    }
}

type Outcomes = Vec<(&'static str, Check)>;

fn record(out: &mut Outcomes, name: &'static str, c: Check) {
    out.push((name, c));
}

fn run_case(rng: &mut ChaCha8Rng, scale: Scale) -> Outcomes {
    let mut out = Vec::new();
    let out = &mut out;
    let t = Mode::Transversal;
    let q = checks::admissible_quiver(rng, scale);
    let x = checks::object(rng, &q, scale);
    let y = checks::object(rng, &q, scale);
    let i = checks::level(rng, &x, t);

    record(out, "weight_decomposition", checks::weight_decomposition(&x, &y, i, t));
    let m = checks::module(rng, &q, scale);
    let n = checks::module(rng, &q, scale);
    record(out, "nice_decomposition", checks::nice_decomposition(&m, i));
    record(out, "spectral_convergence", checks::spectral(&x, t));
    record(out, "degeneration", checks::degenerates(&x, t));
    record(out, "choice_independence", checks::choice_independence(&x, t, rng));
    let f = checks::morphism(rng, &x, &y);
    let deg = rng.gen_range(-2..=3);
    record(out, "strictness", checks::strictness(&f, deg, i, t));
    record(out, "k0_additivity", checks::k0_triangle(&f));
    record(out, "heart_filtration", checks::heart_filtration(&m, &n, rng));
    let shift = rng.gen_range(-1..=2);
    record(out, "hom_cross_oracle", checks::hom_cross_oracle(&x, &y, shift));
    record(out, "adjunctions", checks::adjunctions(&x, &y, i, i - rng.gen_range(1..=2)));
    let budget = CheckBudget {
        samples: 2,
        seed: rng.gen(),
        max_dim: 2,
    };
    record(out, "duality", checks::duality(&q, budget));
    std::mem::take(out)
}

/// Runs `cases` random cases on all cores; case `k` draws from its own stream
/// of `seed` and tallies are folded in case order, so reports are reproducible.
pub fn selftest(seed: u64, cases: usize) -> SelftestResult {
    let scale = Scale::default();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cases.max(1));
    let next = AtomicUsize::new(0);
    let mut results: Vec<(usize, Outcomes)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let case = next.fetch_add(1, Ordering::Relaxed);
                        if case >= cases {
                            break done;
                        }
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        rng.set_stream(case as u64);
                        done.push((case, run_case(&mut rng, scale)));
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("selftest worker panicked"))
            .collect()
    });
    results.sort_by_key(|(case, _)| *case);
    let mut invariants: BTreeMap<&'static str, Tally> = BTreeMap::new();
    for (case, outcomes) in results {
        for (name, c) in outcomes {
            let t = invariants.entry(name).or_default();
            match c {
                Ok(()) => t.pass += 1,
                Err(e) => {
                    t.fail += 1;
                    t.first_failure.get_or_insert((case, e));
                }
            }
        }
    }
    SelftestResult {
        seed,
        cases,
        invariants,
    }
}
