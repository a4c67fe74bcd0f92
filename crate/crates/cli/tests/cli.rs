use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadfrob")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn column(v: &Value, key: &str) -> Vec<i64> {
    v["rows"].as_array().unwrap().iter().map(|r| r[key].as_i64().unwrap()).collect()
}

#[test]
fn hilbert_a_row() {
    let v = json(&["hilbert", "--n", "3", "--p", "3", "--algebra", "A"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(column(&v, "dim"), [1, 5, 14, 26, 35, 35, 26, 14, 5, 1]);
}

#[test]
fn hilbert_c_both_sources_agree() {
    let v = json(&["hilbert", "--n", "3", "--p", "3", "--algebra", "C", "--source", "both"]);
    assert_eq!(column(&v, "dim"), [1, 5, 14, 25, 14, 5, 1]);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["source"] == "both-agree"));
}

#[test]
fn gamma_values() {
    let v = json(&["hilbert", "--n", "3", "--p", "3", "--algebra", "gamma"]);
    assert_eq!(column(&v, "gamma"), [0, 1, 1]);
}

#[test]
fn tsv_output() {
    let out = run(&["hilbert", "--n", "3", "--p", "3", "--algebra", "gamma", "--format", "tsv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "i\tgamma\n0\t0\n1\t1\n2\t1\n");
}

#[test]
fn characteristic_two_is_a_usage_error() {
    assert_eq!(run(&["hilbert", "--n", "3", "--p", "2"]).status.code(), Some(2));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tilting-grid"));
}

fn summands(v: &Value) -> Vec<(String, i64, i64)> {
    v["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["kind"].as_str().unwrap().to_string(), s["twist"].as_i64().unwrap(), s["multiplicity"].as_i64().unwrap()))
        .collect()
}

#[test]
fn decompose_spot_values() {
    let v = json(&["decompose", "--n", "3", "--p", "3", "--twist", "3"]);
    let line = |t, m| ("line".to_string(), t, m);
    assert_eq!(summands(&v), [line(1, 1), line(0, 25), line(-1, 1)]);
    let v = json(&["decompose", "--n", "3", "--p", "3", "--twist", "4"]);
    assert_eq!(summands(&v), [line(1, 5), line(0, 14), ("spinor".to_string(), 1, 4)]);
    assert_eq!(v["rank_check"], v["expected_rank"]);
}

#[test]
fn decompose_iterated_lists_sets() {
    let v = json(&["decompose", "--n", "4", "--p", "3", "--s", "2", "--twist", "0"]);
    assert_eq!(v["exact"], false);
    assert!(!v["certain"].as_array().unwrap().is_empty());
    assert!(v["certain"].as_array().unwrap().len() <= v["possible"].as_array().unwrap().len());
}

#[test]
fn matfac_base_case() {
    let v = json(&["matfac", "--m", "0"]);
    assert_eq!(v["verified"], true);
    assert_eq!(v["size"], 1);
    let v = json(&["matfac", "--m", "2", "--variant", "primed", "--q", "3"]);
    assert_eq!(v["verified"], true);
}

#[test]
fn ext_between_lines() {
    // Ext^0(O, O(1)) = H^0(O(1)) on Q_3 has dimension 5
    let v = json(&["ext", "--n", "3", "--from", "O(0)", "--to", "O(1)", "--i", "0"]);
    assert_eq!(column(&v, "dim"), [5]);
}

#[test]
fn tilting_verdicts() {
    let v = json(&["tilting", "--n", "3", "--p", "5", "--s", "1"]);
    assert_eq!(v["verdict"], "Tilting");
    let v = json(&["tilting", "--n", "4", "--p", "3", "--s", "3"]);
    assert_eq!(v["verdict"], "NotQuasiExceptional");
    assert_eq!(v["obstruction"]["i"], 1);
}

#[test]
fn verify_matfac_suite() {
    let v = json(&["verify", "--suite", "matfac", "--m-max", "3", "--jobs", "2"]);
    assert_eq!(v["suites"][0]["passed"], true);
}
