use std::path::PathBuf;
use std::process::Command;

use weightforge::quiver::{projective, simple};
use weightforge_cli::document::{from_raw, parse, serialize};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_weightforge"))
        .args(args)
        .env_remove("WEIGHTFORGE_SEED")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn q1_text() -> String {
    std::fs::read_to_string(fixture("q1.json")).unwrap()
}

#[test]
fn fixture_parses() {
    let doc = parse(&q1_text()).unwrap();
    let q = &doc.quiver;
    assert_eq!(doc.reps["P_u"], projective(q, 0));
    assert_eq!(doc.reps["S_u"], simple(q, 0));
    assert_eq!(doc.reps["S_v"], simple(q, 1));
    assert_eq!(doc.complexes["Res_S_u"].cohomology_dims(0), vec![1, 0]);
}

#[test]
fn round_trip() {
    let doc = parse(&q1_text()).unwrap();
    let raw = serialize(&doc);
    let text = serde_json::to_string(&raw).unwrap();
    let again = parse(&text).unwrap();
    assert_eq!(*again.quiver, *doc.quiver);
    for (n, m) in &doc.reps {
        assert_eq!(&again.reps[n], m);
    }
    for (n, c) in &doc.complexes {
        assert_eq!(&again.complexes[n], c);
    }
    assert_eq!(serialize(&from_raw(&raw).unwrap()), raw);
}

#[test]
fn schema_errors_carry_paths() {
    let bad_square = q1_text().replace(
        r#""S_u_shift": { "terms": { "-1": "S_u" } }"#,
        r#""S_u_shift": { "terms": { "-1": "S_u" } },
    "sq": { "terms": { "-1": "P_v", "0": "P_u", "1": "P_u" }, "differentials": { "-1": "pv_pu", "0": "id_pu" } }"#,
    )
    .replace(
        r#""pv_pu": "#,
        r#""id_pu": { "from": "P_u", "to": "P_u", "components": { "u": [[1]], "v": [[1]] } },
    "pv_pu": "#,
    );
    let errs = parse(&bad_square).unwrap_err();
    assert!(errs.iter().any(|e| e.path == "complexes.sq" && e.message.contains("degree -1")), "{errs:?}");

    let zero_den = q1_text().replace(r#""a": [[1]]"#, r#""a": [["2/0"]]"#);
    let errs = parse(&zero_den).unwrap_err();
    assert_eq!(errs[0].path, "reps.P_u.arrows.a[0][0]");
    assert!(errs[0].message.contains("zero denominator"));

    let shape = q1_text().replace(r#""a": [[1]]"#, r#""a": [[1, 2]]"#);
    assert_eq!(parse(&shape).unwrap_err()[0].path, "reps.P_u.arrows.a[0]");

    let not_map = q1_text().replace(r#""components": { "u": [[1]] }"#, r#""components": { "v": [[1]] }"#);
    assert!(parse(&not_map).is_err());
}

#[test]
fn transversality_exit_codes() {
    let (code, out, _) = run(&["check-transversality", fixture("q1.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: true"));
    let (code, out, _) = run(&["check-transversality", fixture("q0.json").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("witness"));
    let (code, _, err) = run(&["check-transversality", "/nonexistent.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"));
}

#[test]
fn spectral_pages_print() {
    let f = fixture("q1.json");
    let (code, out, _) = run(&["ss", f.to_str().unwrap(), "--object", "P_u", "--functor", "heart"]);
    assert_eq!(code, 0);
    assert!(out.contains("E_1:") && out.contains("degenerates at E_2: true"));
    let (code, out, _) = run(&["--json", "ss", f.to_str().unwrap(), "--object", "P_u", "--functor", "dim"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["degenerates_at_e2"], true);
}

#[test]
fn other_commands() {
    let f = fixture("q1.json");
    let f = f.to_str().unwrap();
    let (code, out, _) = run(&["k0", f, "--object", "P_u"]);
    assert_eq!(code, 0);
    assert!(out.contains("1[S_u] + 1[S_v]"));
    let (code, out, _) = run(&["decompose", f, "--object", "P_u", "--w", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("A: H^0=[0,1]") && out.contains("C: H^0=[1,0]"));
    let (code, out, _) = run(&["decompose", f, "--object", "S_u", "--nice", "-1"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["gr", f, "--object", "P_u", "--weight", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("Gr_1: [1,0]  Gr'_1: [1,0]  iso: true"));
    let (code, _, _) = run(&["gr", f, "--object", "P_u", "--mode", "stupid"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["decompose", f, "--object", "P_u"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn selftest_is_deterministic() {
    let (code, out, _) = run(&["selftest", "--cases", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: true"));
    let a = run(&["--json", "selftest", "--seed", "3", "--cases", "2"]);
    let b = run(&["--json", "selftest", "--seed", "3", "--cases", "2"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let env = Command::new(env!("CARGO_BIN_EXE_weightforge"))
        .args(["--json", "selftest", "--seed", "9", "--cases", "2"])
        .env("WEIGHTFORGE_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), a.1);
}
