use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flasque"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out) = run(&full);
    (code, serde_json::from_str(&out).expect("valid json"))
}

#[test]
fn esempio_json() {
    let (code, v) = run_json(&["reproduce", "esempio", "--p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["invariant_factors"]["H1(L,F~)"], serde_json::json!([2]));
    assert!(v["timings"].is_null());
}

#[test]
fn classify_f_tilde() {
    let f = data("f_tilde_p2.lat");
    let (code, v) = run_json(&["classify", "--input", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["flasque"]["holds"], true);
    assert_eq!(v["coflasque"]["holds"], false);
    assert_eq!(v["permutation"]["status"], "refuted");
}

#[test]
fn cohomology_of_trivial_z() {
    let f = data("trivial_z.lat");
    let (code, text) = run(&["cohomology", "--input", f.to_str().unwrap(), "--degree", "1"]);
    assert_eq!(code, 0);
    assert!(text.contains("trivial group"), "{}", text);
    let (_, v) = run_json(&["cohomology", "--input", f.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(v["invariant_factors"], serde_json::json!([2]));
}

#[test]
fn cohomology_on_subgroup() {
    let f = data("f_tilde_p2.lat");
    let (code, v) = run_json(&["cohomology", "--input", f.to_str().unwrap(), "--degree", "1", "--subgroup", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["subgroup"], serde_json::json!([0, 1]));
    assert_eq!(v["invariant_factors"], serde_json::json!([]));
}

#[test]
fn emitted_lattice_matches_data_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.lat");
    let (code, _) = run(&["reproduce", "esempio", "--p", "2", "--emit-lattice", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let emitted = std::fs::read_to_string(&path).unwrap();
    let shipped = std::fs::read_to_string(data("f_tilde_p2.lat")).unwrap();
    assert_eq!(emitted, shipped);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, stdout) = run(&["--format", "json", "--out", path.to_str().unwrap(), "reproduce", "esatta"]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["ranks"]["N"], 9);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["reproduce", "flasque-z", "--p", "3"]).0, 2);
    assert_eq!(run(&["reproduce", "piatto", "--p", "4"]).0, 2);
    assert_eq!(run(&["reproduce", "annullamento", "--p", "2"]).0, 2);
    assert_eq!(run(&["classify", "--input", "/nonexistent/x.lat"]).0, 2);
    let (code, v) = run_json(&["--budget", "10", "reproduce", "flasque-z", "--p", "2"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "resource-limit");
}

#[test]
fn rejects_non_representation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.lat");
    std::fs::write(
        &path,
        r#"{"group": {"type": "abelian", "orders": [3]}, "rank": 2, "action": [[[0, 1], [1, 0]]]}"#,
    )
    .unwrap();
    let (code, v) = run_json(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "invalid-input");
}

#[test]
fn in_process_entry_point() {
    assert_eq!(flasque_cli::run(["flasque", "--version"]), 0);
    assert_eq!(flasque_cli::run(["flasque", "reproduce", "piatto", "--p", "2", "--out", "/dev/null"]), 0);
}

#[test]
fn timings_are_opt_in() {
    let (_, v) = run_json(&["--timings", "reproduce", "piatto", "--p", "2"]);
    assert!(v["timings"]["total"].is_number());
}
