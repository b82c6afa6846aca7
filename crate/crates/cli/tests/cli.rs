use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spectral-stokes"));
    c.env_remove("SPECTRAL_STOKES_MODE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spectral-stokes-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn chain_verify() {
    let o = run(&["chain", "verify", "--a", "3,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["a"], serde_json::json!([3, 2]));
    assert_eq!(v["mu"], 4);
    assert_eq!(v["holds"], true);
}

#[test]
fn solve2_outside_is_a_domain_error() {
    let o = run(&["solve2", "--a", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "OutOfT");
}

#[test]
fn solve2_table_row() {
    let v = stdout_json(&run(&["solve2", "--a", "-2"]));
    assert_eq!(v["beta1"], "0");
    assert_eq!(v["alpha1"], "-1/2");
    assert_eq!(v["class"], "Seif(-1,1,2,1)");
    assert_eq!(
        v["spp"].to_string(),
        r#"[{"alpha":"-1/2","level":2,"mult":1},{"alpha":"1/2","level":0,"mult":1}]"#
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["chain", "verify"]).status.code(), Some(2));
    assert_eq!(run(&["solve2", "--a", "1", "--output", "csv"]).status.code(), Some(2));
    assert_eq!(run(&["solve2", "--a", "1", "--tol", "0"]).status.code(), Some(2));
    let o = bin().env("SPECTRAL_STOKES_MODE", "sideways").args(["solve2", "--a", "1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scan_rows() {
    let o = run(&["strata3", "scan", "--step", "0.25", "--out", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("a1,a2,a3,f,stratum,type\n"));
    assert!(text.lines().any(|l| l.starts_with("2,2,2,0,Exceptional,")), "no (2,2,2) row");
}

#[test]
fn scan_of_the_origin() {
    let o = run(&["strata3", "scan", "--step", "1", "--lim", "0"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("0,0,0,4,Identity,\"3·Seif(1,1,1,1)\""));
    let o = run(&["strata3", "scan", "--step", "1/4", "--lim", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mode_variable_overrides_flag() {
    let exact = stdout_json(&run(&["solve2", "--a", "1", "--mode", "exact"]));
    assert_eq!(exact["beta1"], "1/3");
    let o = bin().env("SPECTRAL_STOKES_MODE", "numeric").args(["solve2", "--a", "1", "--mode", "exact"]).output().unwrap();
    let num = stdout_json(&o);
    assert!(num["beta1"].is_f64(), "{num}");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = run(&["hor", "verify", "--n", "6", "--samples", "30", "--seed", "7"]);
    let b = run(&["hor", "verify", "--n", "6", "--samples", "30", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["holds"], true);
}

#[test]
fn seifert_and_orbit_files() {
    let e = temp_file("e.json", r#"{"n":3,"entries":[[1,2,2],[0,1,2],[0,0,1]]}"#);
    let v = stdout_json(&run(&["seifert", "classify", "--matrix", e.to_str().unwrap()]));
    assert_eq!(v["class"], "Seif(1,1,1,1) + Seif(-1,2,1)");
    let v = stdout_json(&run(&["seifert", "iso", e.to_str().unwrap(), e.to_str().unwrap()]));
    assert_eq!(v["isomorphic"], true);
    let v = stdout_json(&run(&["orbit", "explore", "--matrix", e.to_str().unwrap(), "--depth", "3"]));
    assert_eq!(v["char_poly_invariant"], true);
    let bad = temp_file("bad.json", r#"{"n":2,"entries":[[1,0],[3,1]]}"#);
    let o = run(&["orbit", "explore", "--matrix", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn conj16_report_shape() {
    let v = stdout_json(&run(&["orbit", "conj16", "--n", "3"]));
    for key in ["groups", "violations", "collisions"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn track_reports_leaving_t() {
    let p = temp_file("p.json", r#"[{"n":2,"entries":[[1,0],[0,1]]},{"n":2,"entries":[[1,3],[0,1]]}]"#);
    let o = run(&["track", "--path-file", p.to_str().unwrap(), "--steps", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["left_t"], true);
}

#[test]
fn hor_round_trip() {
    let v = stdout_json(&run(&["hor", "matrix", "--poly", "1,1,1"]));
    assert_eq!(v["k"], 1);
    assert_eq!(v["spectrum"], serde_json::json!(["1/6", "-1/6"]));
    let t = stdout_json(&run(&["hor", "track", "--target-poly", "1,1,1", "--steps", "64"]));
    assert_eq!(t["endpoint_ok"], true);
}

#[test]
fn selftest_single_criterion() {
    let o = run(&["selftest", "--criterion", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v[0]["passed"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("criterion 5 [PASS]"));
}
