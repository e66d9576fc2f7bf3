//! End-to-end tests of the binary: exit codes, report shape, and the
//! byte-identical JSON guarantee.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lieder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lieder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON report")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("lieder-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("temp file writable");
    path
}

#[test]
fn delta_cubic_passes_with_byte_identical_json() {
    let first = lieder(&["relations", "delta-cubic", "--json"]);
    let second = lieder(&["relations", "delta-cubic", "--json"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(
        first.stdout, second.stdout,
        "JSON output must not vary between runs"
    );
    let report = report(&first);
    assert_eq!(report["status"], "pass");
    assert_eq!(report["command"], "relations delta-cubic --json");
    assert_eq!(report["payload"]["relating_scalar"], "-1/40");
}

#[test]
fn unknown_flag_exits_two_with_usage_text() {
    let out = lieder(&["relations", "delta-cubic", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Usage"), "stderr was: {stderr}");
}

#[test]
fn help_exits_zero() {
    let out = lieder(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn odd_weight_is_a_usage_error() {
    let out = lieder(&["relations", "quadratic", "--weight", "13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
}

#[test]
fn malformed_expression_is_a_usage_error() {
    let out = lieder(&["lie", "bracket", "[T,A", "A"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn too_small_truncation_is_a_usage_error() {
    let out = lieder(&[
        "bridge",
        "strictness",
        "--d",
        "1",
        "--n0",
        "4",
        "--n1",
        "4",
        "--truncation",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cocycles_minus_part_at_weight_12_is_one_polynomial() {
    let out = lieder(&["cocycles", "--weight", "12", "--minus", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = report(&out);
    assert_eq!(report["payload"]["dim"], 1);
    assert_eq!(report["payload"]["degree"], 10);
    assert_eq!(report["payload"]["basis"].as_array().unwrap().len(), 1);
}

#[test]
fn wtfilt_computes_the_filtration_from_a_matrix_file() {
    let path = temp_file("j3.json", r#"[["0","1","0"],["0","0","1"],["0","0","0"]]"#);
    let out = lieder(&["wtfilt", "--matrix", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = report(&out);
    let jumps: Vec<(i64, u64)> = report["payload"]["jumps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|j| (j["index"].as_i64().unwrap(), j["dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(jumps, vec![(-2, 1), (0, 2), (2, 3)]);
    std::fs::remove_file(path).ok();
}

#[test]
fn wtfilt_rejects_a_non_nilpotent_matrix_as_mathematical_failure() {
    let path = temp_file("id2.json", r#"[["1","0"],["0","1"]]"#);
    let out = lieder(&["wtfilt", "--matrix", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = report(&out);
    assert_eq!(report["status"], "fail");
    assert!(report["payload"]["error"]
        .as_str()
        .unwrap()
        .contains("nilpotent"));
    std::fs::remove_file(path).ok();
}

#[test]
fn wtfilt_missing_file_is_a_usage_error() {
    let out = lieder(&["wtfilt", "--matrix", "/nonexistent/matrix.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_all_under_a_small_cap_passes_in_name_order() {
    let out = lieder(&["verify-all", "--max-weight", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = report(&out);
    assert_eq!(report["status"], "pass");
    let names: Vec<&str> = report["payload"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 11);
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted, "checks must be ordered by name");
}
