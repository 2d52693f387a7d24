//! Command-line driver: parses input documents, routes to the engine, prints reports.

pub mod checks;
pub mod document;
pub mod report;
pub mod selftest;

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::json;
use weightforge::derived::{truncation_triangle, DerivedObject, Triangle};
use weightforge::spectral::{gr_heart, k0_class, run_ss, HomFunctor};
use weightforge::weight::{check_transversality, nice_decompose, weight_decompose, CheckBudget, Mode};

use document::{Document, SchemaError};
use report::{dims, Report};

pub const SEED_ENV: &str = "WEIGHTFORGE_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Transversal,
    Stupid,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Transversal => Mode::Transversal,
            ModeArg::Stupid => Mode::StupidOnProj,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "weightforge", version, about = "Weight structures on derived categories of quiver representations")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Transversal)]
    pub mode: ModeArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a document and summarize its contents.
    Validate { file: PathBuf },
    /// Decide transversality of the vertex filtration of the document's quiver.
    CheckTransversality {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A t-truncation, weight decomposition or nice decomposition of one object.
    #[command(group(ArgGroup::new("cut").required(true).args(["t", "w", "nice"])))]
    Decompose {
        file: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<i32>,
        #[arg(long, allow_negative_numbers = true)]
        w: Option<i32>,
        #[arg(long, allow_negative_numbers = true)]
        nice: Option<i32>,
    },
    /// Pages of the weight spectral sequence.
    Ss {
        file: PathBuf,
        #[arg(long)]
        object: String,
        /// `heart`, `dim`, or `vertex:<id>`.
        #[arg(long, default_value = "heart")]
        functor: String,
    },
    /// The class in K_0 in the basis of simples.
    K0 {
        file: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Graded pieces of a representation.
    Gr {
        file: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long, allow_negative_numbers = true)]
        weight: Option<i32>,
    },
    /// Run the invariant suite on random instances.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Io(PathBuf, String),
    Schema(Vec<SchemaError>),
    Usage(String),
    Engine(weightforge::Error),
}

impl From<weightforge::Error> for CliError {
    fn from(e: weightforge::Error) -> Self {
        CliError::Engine(e)
    }
}

impl CliError {
    pub fn messages(&self) -> Vec<String> {
        match self {
            CliError::Io(p, e) => vec![format!("{}: {e}", p.display())],
            CliError::Schema(es) => es.iter().map(|e| e.to_string()).collect(),
            CliError::Usage(s) => vec![s.clone()],
            CliError::Engine(e) => vec![e.to_string()],
        }
    }
}

/// A finished command: what to print and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn load(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e.to_string()))?;
    document::parse(&text).map_err(CliError::Schema)
}

fn object(doc: &Document, name: &str) -> Result<DerivedObject, CliError> {
    doc.object(name)
        .map(DerivedObject::new)
        .ok_or_else(|| CliError::Usage(format!("no complex or representation named `{name}`")))
}

fn parse_functor(doc: &Document, s: &str) -> Result<HomFunctor, CliError> {
    match s {
        "heart" => Ok(HomFunctor::THomology),
        "dim" => Ok(HomFunctor::TotalDim),
        _ => match s.strip_prefix("vertex:") {
            Some(v) => Ok(HomFunctor::DimAtVertex(doc.quiver.vertex(v)?)),
            None => Err(CliError::Usage(format!("unknown functor `{s}`"))),
        },
    }
}

/// `WEIGHTFORGE_SEED` wins over `--seed`.
pub fn effective_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}=`{s}` is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn cohomology_line(name: &str, o: &DerivedObject) -> String {
    let c = o.complex();
    match c.cohomology_range() {
        None => format!("  {name}: 0"),
        Some((lo, hi)) => {
            let parts: Vec<String> = (lo..=hi)
                .map(|n| format!("H^{n}={}", dims(&c.cohomology_dims(n))))
                .collect();
            format!("  {name}: {}", parts.join(" "))
        }
    }
}

fn cohomology_json(o: &DerivedObject) -> serde_json::Value {
    let c = o.complex();
    let entries: serde_json::Map<String, serde_json::Value> = c
        .cohomology_range()
        .map(|(lo, hi)| {
            (lo..=hi)
                .map(|n| (n.to_string(), json!(c.cohomology_dims(n))))
                .collect()
        })
        .unwrap_or_default();
    serde_json::Value::Object(entries)
}

fn triangle_report(r: &mut Report, t: &Triangle) {
    for (name, o) in [("A", &t.a), ("B", &t.b), ("C", &t.c)] {
        r.line(cohomology_line(name, o));
    }
    let exact = t.is_exact_on_cohomology();
    r.line(format!("  long exact sequence: {exact}"));
    r.result = json!({
        "a": cohomology_json(&t.a),
        "b": cohomology_json(&t.b),
        "c": cohomology_json(&t.c),
        "exact": exact,
    });
}

pub fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let mode: Mode = cli.mode.into();
    match &cli.command {
        Command::Validate { file } => {
            let doc = load(file)?;
            let q = &doc.quiver;
            let mut r = Report::new(format!("validate {}", file.display()));
            let qr = q.report();
            r.line(format!(
                "quiver: {} vertices, {} arrows, admissible: {}",
                q.vertex_count(),
                q.arrow_count(),
                q.is_admissible()
            ));
            for (n, m) in &doc.reps {
                r.line(format!("rep {n}: dims {}", dims(m.dims())));
            }
            for (n, c) in &doc.complexes {
                let o = DerivedObject::new(c.clone());
                r.line(cohomology_line(&format!("complex {n}"), &o).trim_start().to_string());
            }
            for n in doc.maps.keys() {
                r.line(format!("map {n}"));
            }
            for n in doc.chain_maps.keys() {
                r.line(format!("chain map {n}"));
            }
            r.result = json!({
                "quiver": qr,
                "reps": doc.reps.keys().collect::<Vec<_>>(),
                "maps": doc.maps.keys().collect::<Vec<_>>(),
                "complexes": doc.complexes.keys().collect::<Vec<_>>(),
                "chain_maps": doc.chain_maps.keys().collect::<Vec<_>>(),
            });
            r.verdict = Some(true);
            Ok(r)
        }
        Command::CheckTransversality { file, samples, seed } => {
            let doc = load(file)?;
            let seed = effective_seed(*seed)?;
            let budget = CheckBudget {
                samples: *samples,
                seed,
                ..CheckBudget::default()
            };
            let rep = check_transversality(&doc.quiver, budget);
            let mut r = Report::new(format!("check-transversality {}", file.display()));
            r.seed = Some(seed);
            r.line(format!("admissible: {}", rep.admissible));
            r.line(format!(
                "orthogonality: {} entries checked, shifts {}..{}",
                rep.entries_checked, rep.shift_window.0, rep.shift_window.1
            ));
            for e in &rep.nonzero_entries {
                r.line(format!(
                    "  Hom(S_{}, S_{}[{}]) = {}{}",
                    e.from,
                    e.to,
                    e.shift,
                    e.dim,
                    if e.must_vanish { "  VIOLATION" } else { "" }
                ));
            }
            for s in &rep.slices {
                let w = match &s.witness {
                    Some(w) => format!("  witness: {w:?}"),
                    None => String::new(),
                };
                r.line(format!("slice {}: semisimple {}{w}", s.weight, s.semisimple));
            }
            for c in &rep.conditions {
                let kind = if c.sampled { "sampled" } else { "exact" };
                r.line(format!("{}: {} ({kind}) {}", c.name, c.holds, c.detail));
            }
            r.line(format!("conditions agree: {}", rep.conditions_agree));
            r.verdict = Some(rep.overall);
            r.result = serde_json::to_value(&rep).expect("report serializes");
            Ok(r)
        }
        Command::Decompose { file, object: name, t, w, nice } => {
            let doc = load(file)?;
            let x = object(&doc, name)?;
            let cut = match (t, w, nice) {
                (Some(i), _, _) => format!("--t {i}"),
                (_, Some(i), _) => format!("--w {i}"),
                (_, _, Some(i)) => format!("--nice {i}"),
                _ => unreachable!("clap requires one cut"),
            };
            let mut r = Report::new(format!("decompose {} --object {name} {cut}", file.display()));
            if let Some(i) = t {
                r.line(format!("tau<={i} X -> X -> tau>={} X", i + 1));
                triangle_report(&mut r, &truncation_triangle(x.complex(), *i));
            } else if let Some(i) = w {
                r.line(format!("w<={i} X -> X -> w>={} X", i + 1));
                triangle_report(&mut r, &weight_decompose(&x, *i, mode)?);
            } else if let Some(i) = nice {
                let m = doc
                    .reps
                    .get(name)
                    .ok_or_else(|| CliError::Usage(format!("`{name}` is not a representation")))?;
                r.line(format!("W<={i} M -> M -> M / W<={i} M"));
                triangle_report(&mut r, &nice_decompose(m, *i)?);
            }
            Ok(r)
        }
        Command::Ss { file, object: name, functor } => {
            let doc = load(file)?;
            let x = object(&doc, name)?;
            let h = parse_functor(&doc, functor)?;
            let ss = run_ss(h, &x, mode)?;
            let mut r = Report::new(format!("ss {} --object {name} --functor {functor}", file.display()));
            r.line(format!("levels {}..{}, degrees {}..{}", ss.levels.0, ss.levels.1, ss.degrees.0, ss.degrees.1));
            for page in &ss.pages {
                r.line(format!("E_{}:", page.r));
                r.line(format!("  {:>4} {:>4} {:>12} {:>6}", "p", "q", "dims", "rank d"));
                for e in page.entries.iter().filter(|e| e.dims.iter().any(|&d| d > 0)) {
                    r.line(format!("  {:>4} {:>4} {:>12} {:>6}", e.p, e.q, dims(&e.dims), e.d_rank));
                }
            }
            r.line(format!("stable page: E_{}", ss.stable_page));
            r.line(format!("degenerates at E_2: {}", ss.degenerates_at_e2));
            r.line(format!("oracle agrees: {}", ss.oracle_agrees));
            r.line(format!("converges to H: {}", ss.converges));
            r.line(format!("E_inf matches filtration: {}", ss.e_inf_matches_filtration));
            r.verdict = Some(ss.degenerates_at_e2);
            r.result = serde_json::to_value(&ss).expect("pages serialize");
            Ok(r)
        }
        Command::K0 { file, object: name } => {
            let doc = load(file)?;
            let x = object(&doc, name)?;
            let k = k0_class(x.complex());
            let mut r = Report::new(format!("k0 {} --object {name}", file.display()));
            let terms: Vec<String> = doc
                .quiver
                .vertices()
                .iter()
                .zip(&k.0)
                .filter(|(_, c)| **c != 0)
                .map(|(v, c)| format!("{c}[S_{}]", v.id))
                .collect();
            r.line(if terms.is_empty() { "0".into() } else { terms.join(" + ") });
            r.result = serde_json::to_value(&k).expect("class serializes");
            Ok(r)
        }
        Command::Gr { file, object: name, weight } => {
            let doc = load(file)?;
            let m = doc
                .reps
                .get(name)
                .ok_or_else(|| CliError::Usage(format!("`{name}` is not a representation")))?;
            let (lo, hi) = match weight {
                Some(i) => (*i, *i),
                None => doc.quiver.weight_range().unwrap_or((0, -1)),
            };
            let mut r = Report::new(format!("gr {} --object {name}", file.display()));
            let mut all = Vec::new();
            let mut ok = true;
            for i in lo..=hi {
                let g = gr_heart(m, i, mode)?;
                r.line(format!(
                    "Gr_{i}: {}  Gr'_{i}: {}  iso: {}  criterion: {}",
                    dims(g.gr.dims()),
                    dims(g.gr_dual.dims()),
                    g.is_iso,
                    g.criterion_holds
                ));
                ok &= g.is_iso && g.criterion_holds;
                all.push(g);
            }
            r.verdict = Some(ok);
            r.result = serde_json::to_value(&all).expect("witnesses serialize");
            Ok(r)
        }
        Command::Selftest { seed, cases } => {
            let seed = effective_seed(*seed)?;
            let res = selftest::selftest(seed, *cases);
            let mut r = Report::new(format!("selftest --cases {cases}"));
            r.seed = Some(seed);
            for (name, t) in &res.invariants {
                let extra = match &t.first_failure {
                    Some((case, msg)) => format!("  first failure: case {case}: {msg}"),
                    None => String::new(),
                };
                r.line(format!("{name:<22} pass {:>4}  fail {:>4}{extra}", t.pass, t.fail));
            }
            r.verdict = Some(res.all_pass());
            r.result = serde_json::to_value(&res).expect("tallies serialize");
            Ok(r)
        }
    }
}

fn is_check(c: &Command) -> bool {
    matches!(c, Command::CheckTransversality { .. } | Command::Selftest { .. } | Command::Gr { .. })
}

/// Runs a parsed command line. Exit codes: 0 success, 1 a check came out false, 2 bad input.
pub fn execute(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(r) => {
            let failed = is_check(&cli.command) && r.verdict == Some(false);
            Outcome {
                stdout: r.render(cli.json),
                stderr: String::new(),
                code: i32::from(failed),
            }
        }
        Err(e) => {
            let msgs = e.messages();
            let stdout = if cli.json {
                let mut s = serde_json::to_string_pretty(&json!({ "errors": msgs })).expect("strings serialize");
                s.push('\n');
                s
            } else {
                String::new()
            };
            let stderr = msgs.iter().map(|m| format!("error: {m}\n")).collect();
            Outcome { stdout, stderr, code: 2 }
        }
    }
}
