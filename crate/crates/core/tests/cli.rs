use std::path::Path;
use std::process::{Command, Output};

use geohamilton::builder::verify_cycle;
use geohamilton::fixtures::planted_clique_instance;
use geohamilton::NormSpec;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geohamilton")).args(args).output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn limit_curve_grid() {
    let out = run(&["limit-curve", "--from", "-6", "--to", "6", "--step", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,probability"));
    let probs: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(probs.len(), 25);
    assert!(probs.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (p, w) in [(&a, "1"), (&b, "3")] {
        let out = run(&["simulate", "--n", "12", "--trials", "100", "--seed", "7", "--workers", w, "-o", path_str(p)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(b).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 101);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"n": 9, "trials": 3, "master_seed": 5, "norm": {"d": 2, "p": "inf"}}"#).unwrap();
    let out = run(&["simulate", "--config", path_str(&cfg), "--trials", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.starts_with(|c: char| c.is_ascii_digit()) && r.contains(",9,2,inf,")));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["simulate", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nothing"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--n", "40"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--mode", "sideways"]).status.code(), Some(2));
    assert_eq!(run(&["build-cycle"]).status.code(), Some(2));
    assert_eq!(run(&["limit-curve", "--step", "0"]).status.code(), Some(2));
}

#[test]
fn build_cycle_on_planted_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let cyc = dir.path().join("cycle.txt");
    let diag = dir.path().join("diag.json");
    let out = run(&["build-cycle", "--planted", "4", "-o", path_str(&cyc), "--diagnostics", path_str(&diag)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let order: Vec<usize> = std::fs::read_to_string(&cyc).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    let inst = planted_clique_instance(4).unwrap();
    assert!(verify_cycle(&inst.points, &NormSpec::euclidean_plane(), inst.rho, &order).is_valid());
    let d: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(diag).unwrap()).unwrap();
    assert_eq!(d["status"], "ok");
    assert_eq!(d["escorts"].as_array().unwrap().len(), 1);
}

#[test]
fn build_cycle_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    let sample = geohamilton::sample_uniform_points(300, &NormSpec::euclidean_plane(), 1).unwrap();
    std::fs::write(&pts, sample.to_text()).unwrap();
    let diag = dir.path().join("diag.json");
    let out = run(&["build-cycle", "--points", path_str(&pts), "--rho", "0.3", "--diagnostics", path_str(&diag)]);
    assert_eq!(out.status.code(), Some(1));
    let d: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(diag).unwrap()).unwrap();
    assert_eq!(d["status"], "failed");
    assert!(d["failure"]["stage"].is_string());
}

#[test]
fn audit_writes_six_verdicts() {
    let out = run(&["audit", "--n", "20000", "--seed", "3", "--r", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "property,pass,witness");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("P1,"));
}

#[test]
fn oracle_check_agrees() {
    let out = run(&["oracle-check", "--instances", "30", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["hamilton_instances"], 30);
    assert!(rep["hamilton_mismatches"].as_array().unwrap().is_empty());
}
