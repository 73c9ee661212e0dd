use std::path::Path;
use std::process::{Command, Output};

use harmult_core::Report;

fn harmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmult")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn report(out: &Output) -> Report {
    Report::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn norm_of_constant_one_in_the_plane() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"dim": 2, "kind": "full", "coeffs": [[1.0]]}"#;
    let input = write(dir.path(), "one.json", text);
    let out = harmult(&["norm", "--input", &input, "--p", "1", "--q", "1", "--alpha", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!((r.values["norm"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    assert_eq!(r.verdicts["consistent"], true);
    assert_eq!(std::fs::read_to_string(&input).unwrap(), text);
}

#[test]
fn malformed_block_names_degree_and_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", r#"{"dim": 3, "kind": "full", "coeffs": [[1.0], [0.5, 0.5]]}"#);
    let out = harmult(&["norm", "--input", &input, "--p", "1", "--q", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("block 1") && err.contains("d_1 = 3"), "{err}");
}

#[test]
fn theorem_range_of_p_is_enforced() {
    let out = harmult(&["mult-check", "--p", "1.5", "--alpha", "0.25", "--beta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 < p ≤ 1"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(harmult(&["lemma", "--id", "7"]).status.code(), Some(2));
    assert_eq!(harmult(&["norm", "--p", "1"]).status.code(), Some(2));
}

#[test]
fn lemma_commands() {
    let out = harmult(&["lemma", "--id", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).verdicts["pass"], true);

    assert_eq!(harmult(&["lemma", "--id", "3"]).status.code(), Some(0));

    let out = harmult(&["lemma", "--id", "2", "--alpha", "1", "--lambda", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("λ > α + 1"));
}

#[test]
fn identity_multiplier_cells() {
    let out = harmult(&["mult-check", "--alpha", "0.25", "--beta", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.verdicts["equivalence"], "pass");
    assert_eq!(r.verdicts["condition2"], "bounded");
    assert_eq!(r.verdicts["probe"], "bounded");

    let out = harmult(&["mult-check", "--alpha", "0.5", "--beta", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.verdicts["condition2"], "unbounded");
    assert_eq!(r.verdicts["probe"], "unbounded");
}

#[test]
fn reports_round_trip_and_out_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kernel.json");
    let out = harmult(&["kernel", "--kind", "poisson", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed = Report::from_json(&text).unwrap();
    assert_eq!(parsed.to_json(), text);

    let to_file = harmult(&["kernel", "--kind", "poisson", "--dim", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}
