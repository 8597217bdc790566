use std::process::{Command, Output};

use serde_json::Value;

fn vgv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vgv")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = vgv(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn jsonl(args: &[&str]) -> Vec<Value> {
    let out = vgv(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn classify_maximal_over_f3_6() {
    let v = json_ok(&["--no-cache", "classify", "--p0", "3", "--s", "1", "--n", "6", "--R", "1,2", "--kmax", "2"]);
    assert_eq!(v["tool"], "vgv");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["cap"], 200_000_000);
    let row = &v["result"]["table"][0];
    assert_eq!(row["verdict"], "maximal");
    assert_eq!(row["count"], "892");
    assert_eq!(row["evidence"], "formula+oracle");
    assert_eq!(v["result"]["genus"], "3");
}

#[test]
fn classify_minimal_over_f625() {
    let v = json_ok(&["--no-cache", "classify", "--p0", "5", "--s", "1", "--n", "4", "--R", "0,2", "--kmax", "1"]);
    assert_eq!(v["result"]["table"][0]["verdict"], "minimal");
    assert_eq!(v["result"]["table"][0]["count"], "126");
}

#[test]
fn malformed_coefficients_exit_2() {
    let out = vgv(&["--no-cache", "classify", "--p0", "3", "--R", "1,two"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed coefficient"));
    assert_eq!(vgv(&["--no-cache", "classify", "--p0", "4", "--R", "1,2"]).status.code(), Some(2));
    assert_eq!(vgv(&["verify", "--theorem", "nope"]).status.code(), Some(2));
}

#[test]
fn count_and_refusal() {
    let v = json_ok(&["--no-cache", "count", "--p0", "3", "--n", "6", "--R", "1,2"]);
    assert_eq!(v["result"]["projective"], "892");
    let v = json_ok(&["--no-cache", "count", "--p0", "3", "--n", "1", "--R", "1,2"]);
    assert_eq!(v["result"]["verdict"], "neither");
    let out = vgv(&["--no-cache", "--cap", "100", "count", "--p0", "3", "--n", "6", "--R", "1,2"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn tsv_header_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let c = cache.to_str().unwrap();
    let args = ["--cache", c, "--format", "tsv", "count", "--p0", "3", "--n", "6", "--R", "1,2", "--k", "2"];
    let first = vgv(&args);
    assert_eq!(first.status.code(), Some(0));
    let text = String::from_utf8(first.stdout.clone()).unwrap();
    assert!(text.lines().any(|l| l == "k\tverdict\tevidence\tcount\tbound_hi\tbound_lo"));
    assert!(text.lines().any(|l| l.starts_with("2\tminimal\toracle\t527068\t")));
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), 1);
    let second = vgv(&args);
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), 1);
}

#[test]
fn reports_are_reproducible() {
    let args = ["--no-cache", "classify", "--p0", "5", "--n", "2", "--R", "1,2", "--kmax", "2"];
    assert_eq!(vgv(&args).stdout, vgv(&args).stdout);
}

#[test]
fn spec_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"p0": 3, "s": 1, "n": 1, "R": [1, 2], "r": 1, "zeta": {"minpoly": [-1, 0, 1, 0, 1], "which_root": 0}}"#).unwrap();
    let v = json_ok(&["--no-cache", "classify", "--spec", path.to_str().unwrap(), "--kmax", "1", "--no-criteria"]);
    assert_eq!(v["result"]["table"][0]["count"], "136");
    assert_eq!(v["result"]["table"][0]["verdict"], "maximal");
}

#[test]
fn verify_lc_rows() {
    let v = json_ok(&["--no-cache", "verify", "--theorem", "lc", "--p", "3", "--kmax", "12"]);
    let preds = v["result"]["cells"][0]["report"]["predictions"].as_array().unwrap();
    assert_eq!(preds.len(), 12);
    let max: Vec<u64> = preds.iter().filter(|p| p["oracle"] == "maximal" || p["formula"] == "maximal").map(|p| p["k"].as_u64().unwrap()).collect();
    assert_eq!(max, vec![6]);
    assert_eq!(v["result"]["pass"], true);
}

#[test]
fn verify_t214_instance() {
    let v = json_ok(&["--no-cache", "verify", "--theorem", "t214", "--p", "7", "--n", "3", "--e", "1"]);
    let cells = v["result"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 1);
    let p = &cells[0]["report"]["predictions"][0];
    assert_eq!(p["field"], "F_{7^6}");
    assert_eq!(p["oracle"], "maximal");
    assert_eq!(p["count"], "132056");
}

#[test]
fn verify_char3_count() {
    let v = json_ok(&["--no-cache", "verify", "--theorem", "char3", "--kmax", "1"]);
    let p = &v["result"]["cells"][0]["report"]["predictions"][0];
    assert_eq!(p["count"], "136");
    assert_eq!(p["oracle"], "maximal");
}

#[test]
fn verify_pp_grid() {
    let v = json_ok(&["--no-cache", "verify", "--theorem", "pp", "--p", "3", "--f", "1"]);
    let cells = v["result"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 8);
    let maximal = cells.iter().filter(|c| c["report"]["predictions"][0]["claim"] == "maximal").count();
    assert_eq!(maximal, 2);
}

#[test]
fn search_t214_includes_instances() {
    let rows = jsonl(&["--no-cache", "search", "--family", "t214", "--p-max", "7", "--n-max", "4"]);
    let has = |p: &str, field: &str, verdict: &str| rows.iter().any(|r| r["params"].as_str().unwrap().starts_with(p) && r["field"] == field && r["verdict"] == verdict);
    assert!(has("p0=7 s=1 n=3", "F_{7^6}", "maximal"));
    assert!(has("p0=5 s=1 n=4", "F_{5^4}", "minimal"));
    assert!(rows.iter().all(|r| r["version"] == env!("CARGO_PKG_VERSION")));
}

#[test]
fn search_twists_includes_char3_curve() {
    let rows = jsonl(&["--no-cache", "search", "--family", "twists", "--p0", "3", "--d-max", "4", "--kmax", "1"]);
    assert!(rows.iter().any(|r| r["spec"]["zeta"]["minpoly"] == serde_json::json!([2, 0, 1, 0, 1]) && r["verdict"] == "maximal"));
}

#[test]
fn search_empty_range() {
    let out = vgv(&["--no-cache", "search", "--family", "t214", "--p-min", "20", "--p-max", "22"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn search_budget_refusal_flushes() {
    let out = vgv(&["--no-cache", "--budget", "1", "search", "--family", "t214", "--p-max", "7", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out.stdout.is_empty());
}
