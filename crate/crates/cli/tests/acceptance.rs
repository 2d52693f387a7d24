//! One line per acceptance criterion; exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weightforge::derived::{Complex, DerivedObject};
use weightforge::linalg::RatMatrix;
use weightforge::quiver::{fixture_q0, fixture_q1, projective, simple};
use weightforge::random::{random_projective_complex, random_quiver, QuiverShape};
use weightforge::spectral::{k0_class, K0Class};
use weightforge::weight::{CheckBudget, Mode};
use weightforge_cli::checks::{self, Check, Scale};
use weightforge_cli::{execute, Cli, Command, ModeArg};

const T: Mode = Mode::Transversal;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + criterion)
}

/// Runs `n` samples, stopping at the first failure.
fn samples(n: usize, mut f: impl FnMut(usize) -> Check) -> Result<String, String> {
    for k in 0..n {
        f(k).map_err(|e| format!("sample {k}: {e}"))?;
    }
    Ok(format!("{n} samples"))
}

fn c1() -> Result<String, String> {
    let run = |file: &str| {
        execute(&Cli {
            json: true,
            mode: ModeArg::Transversal,
            command: Command::CheckTransversality {
                file: fixture(file),
                samples: 4,
                seed: 0,
            },
        })
    };
    let q1 = run("q1.json");
    let v: serde_json::Value = serde_json::from_str(&q1.stdout).map_err(|e| e.to_string())?;
    let entries = v["result"]["nonzero_entries"].as_array().cloned().unwrap_or_default();
    let off: Vec<_> = entries.iter().filter(|e| e["from"] != e["to"]).collect();
    let table_ok = off.len() == 1
        && off[0]["from"] == "u"
        && off[0]["to"] == "v"
        && off[0]["shift"] == 1
        && off[0]["dim"] == 1;
    if q1.code != 0 || v["verdict"] != true || !table_ok {
        return Err(format!("Q1: exit {}, table {off:?}", q1.code));
    }
    let q0 = run("q0.json");
    let v: serde_json::Value = serde_json::from_str(&q0.stdout).map_err(|e| e.to_string())?;
    let witness = v["result"]["slices"]
        .as_array()
        .is_some_and(|s| s.iter().any(|s| s["semisimple"] == false && !s["witness"].is_null()));
    if q0.code != 1 || v["verdict"] != false || !witness {
        return Err(format!("Q0: exit {}, witness {witness}", q0.code));
    }
    Ok("Q1 true with Hom(S_u, S_v[1]) = 1 only; Q0 false with witness".into())
}

fn c2() -> Result<String, String> {
    let mut r = rng(2);
    let s = Scale::default();
    samples(100, |_| {
        let q = checks::admissible_quiver(&mut r, s);
        let (x, y) = (checks::object(&mut r, &q, s), checks::object(&mut r, &q, s));
        let i = checks::level(&mut r, &x, T);
        checks::weight_decomposition(&x, &y, i, T)?;
        let m = checks::module(&mut r, &q, s);
        checks::nice_decomposition(&m, i)
    })
}

fn c3() -> Result<String, String> {
    let mut r = rng(3);
    let s = Scale::default();
    let q1 = fixture_q1();
    let mut fixed = vec![
        DerivedObject::new(Complex::concentrated(&projective(&q1, 0), 0)),
        DerivedObject::zero(q1.clone()),
    ];
    fixed.push(DerivedObject::new(Complex::concentrated(&simple(&q1, 0), 0).shift(1)));
    for x in &fixed {
        checks::spectral(x, T)?;
    }
    let q0 = fixture_q0();
    samples(60, |k| {
        if k % 3 == 2 {
            let x = DerivedObject::new(random_projective_complex(&mut r, &q0, 3, 2));
            return checks::spectral(&x, Mode::StupidOnProj);
        }
        let q = checks::admissible_quiver(&mut r, s);
        let x = checks::object(&mut r, &q, s);
        checks::spectral(&x, T)
    })
    .map(|m| format!("{m} plus fixtures, all functor tags"))
}

fn c4() -> Result<String, String> {
    let mut r = rng(4);
    let s = Scale::default();
    let q0 = fixture_q0();
    samples(40, |_| {
        let q = checks::admissible_quiver(&mut r, s);
        checks::degenerates(&checks::object(&mut r, &q, s), T)?;
        let x = DerivedObject::new(random_projective_complex(&mut r, &q0, 3, 2));
        checks::degenerates(&x, Mode::StupidOnProj)
    })?;
    samples(100, |_| {
        let q = checks::admissible_quiver(&mut r, s);
        let (x, y) = (checks::object(&mut r, &q, s), checks::object(&mut r, &q, s));
        let f = checks::morphism(&mut r, &x, &y);
        let i = checks::level(&mut r, &y, T);
        let n = match x.complex().cohomology_range() {
            Some((lo, hi)) => r.gen_range(lo..=hi),
            None => 0,
        };
        checks::strictness(&f, n, i, T)
    })
    .map(|m| format!("40 + 40 degenerate, strictness on {m}"))
}

fn c5() -> Result<String, String> {
    let mut r = rng(5);
    let s = Scale {
        max_dim: 3,
        ..Scale::default()
    };
    let pu = projective(&fixture_q1(), 0);
    checks::gr_pieces(&pu)?;
    samples(60, |_| {
        let q = checks::admissible_quiver(&mut r, s);
        let (m, n) = (checks::module(&mut r, &q, s), checks::module(&mut r, &q, s));
        checks::heart_filtration(&m, &n, &mut r)
    })
}

fn c6() -> Result<String, String> {
    let q1 = fixture_q1();
    let cls = |m| k0_class(&Complex::concentrated(&m, 0));
    let (pu, su, sv) = (cls(projective(&q1, 0)), cls(simple(&q1, 0)), cls(simple(&q1, 1)));
    if pu != su.add(&sv) {
        return Err(format!("[P_u] = {pu:?}"));
    }
    let mut r = rng(6);
    let s = Scale::default();
    samples(100, |_| {
        let q = checks::admissible_quiver(&mut r, s);
        let (x, y) = (checks::object(&mut r, &q, s), checks::object(&mut r, &q, s));
        checks::k0_triangle(&checks::morphism(&mut r, &x, &y))
    })?;
    // Classes of S_v[k] over a random quiver span a lattice of full rank.
    for _ in 0..10 {
        let q = random_quiver(&mut r, QuiverShape { max_vertices: 6, ..QuiverShape::default() });
        let n = q.vertex_count();
        let mut classes: Vec<K0Class> = Vec::new();
        for v in 0..n {
            for k in -1..=1 {
                let c = k0_class(&Complex::concentrated(&simple(&q, v), k));
                let expect = if k % 2 == 0 { 1 } else { -1 };
                if c.0[v] != expect || c.0.iter().filter(|&&a| a != 0).count() != 1 {
                    return Err(format!("[S_{v}[{k}]] = {c:?}"));
                }
                classes.push(c);
            }
        }
        let rows: Vec<Vec<weightforge::linalg::Rat>> = classes
            .iter()
            .map(|c| c.0.iter().map(|&a| weightforge::linalg::Rat::from_int(a)).collect())
            .collect();
        if RatMatrix::from_rows(rows, n).rank() != n {
            return Err("simple classes are dependent".into());
        }
    }
    Ok("[P_u] = [S_u] + [S_v]; 100 cone triangles; simples free".into())
}

fn c7() -> Result<String, String> {
    let mut r = rng(7);
    let s = Scale::default();
    let q0 = fixture_q0();
    samples(60, |k| {
        if k % 3 == 2 {
            let x = DerivedObject::new(random_projective_complex(&mut r, &q0, 3, 2));
            return checks::choice_independence(&x, Mode::StupidOnProj, &mut r);
        }
        let q = checks::admissible_quiver(&mut r, s);
        let x = checks::object(&mut r, &q, s);
        checks::choice_independence(&x, T, &mut r)
    })
}

fn c8() -> Result<String, String> {
    let mut r = rng(8);
    let s = Scale::default();
    samples(60, |_| {
        let q = checks::admissible_quiver(&mut r, s);
        let (x, z) = (checks::object(&mut r, &q, s), checks::object(&mut r, &q, s));
        let i = checks::level(&mut r, &x, T);
        let j = i - r.gen_range(1..=3);
        checks::adjunctions(&x, &z, i, j)
    })
}

fn c9() -> Result<String, String> {
    let mut r = rng(9);
    let s = Scale::default();
    samples(200, |_| {
        let q = random_quiver(
            &mut r,
            QuiverShape {
                admissible: false,
                ..QuiverShape::default()
            },
        );
        let (x, y) = (checks::object(&mut r, &q, s), checks::object(&mut r, &q, s));
        let n = r.gen_range(-2..=2);
        checks::hom_cross_oracle(&x, &y, n)
    })
}

fn c10() -> Result<String, String> {
    let mut r = rng(10);
    for q in [fixture_q1(), fixture_q0()] {
        checks::duality(&q, CheckBudget::default())?;
    }
    samples(40, |k| {
        let q = random_quiver(
            &mut r,
            QuiverShape {
                admissible: k % 2 == 0,
                ..QuiverShape::default()
            },
        );
        let budget = CheckBudget {
            samples: 2,
            seed: r.gen(),
            max_dim: 2,
        };
        checks::duality(&q, budget)
    })
    .map(|m| format!("fixtures and {m}"))
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("fixture transversality", c1),
        ("weight and nice decompositions", c2),
        ("spectral convergence and filtration", c3),
        ("degeneration and strictness", c4),
        ("heart filtration and Gr", c5),
        ("K0", c6),
        ("choice independence", c7),
        ("adjunctions", c8),
        ("Hom cross-oracle", c9),
        ("duality", c10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", k + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {e} ({secs:.1}s)", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
