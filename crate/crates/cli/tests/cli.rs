use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn tyd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tyd")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tyd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report on stdout")
}

#[test]
fn passing_suites_exit_zero() {
    let out = tyd(&["check", "typeA,L,mini", "--modes", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["summary"]["fail"], 0);
    assert_eq!(r["config"]["mode_bound"], 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));
}

#[test]
fn small_n_is_a_config_error() {
    let out = tyd(&["check", "L", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n must be at least 5"));
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(tyd(&["check", "nope"]).status.code(), Some(2));
    assert_eq!(tyd(&["check", "L", "--variant", "sideways"]).status.code(), Some(2));
    assert_eq!(tyd(&["check", "L", "--modes", "1"]).status.code(), Some(2));
    assert_eq!(tyd(&["check", "L", "--catalog", "L=/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(tyd(&["check"]).status.code(), Some(2));
}

#[test]
fn failing_suite_exits_one() {
    let out = tyd(&["check", "appendixA", "--modes", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let failing: Vec<&str> = r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["status"] == "fail")
        .map(|e| e["relation_id"].as_str().unwrap())
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|id| id.starts_with("far-fork")));
}

#[test]
fn ty_phi_marks_the_losing_variant_informational() {
    let out = tyd(&["check", "ty-phi"]);
    let r = report(&out);
    let entries = r["entries"].as_array().unwrap();
    let literal_fail = entries
        .iter()
        .any(|e| e["params"]["variant"] == "paper_literal" && e["status"] == "fail");
    assert!(!literal_fail);
    assert!(entries.iter().any(|e| e["params"]["variant"] == "paper_literal" && e["status"] == "informational"));
    let summary = entries.iter().find(|e| e["relation_id"] == "unique-passing-variant").unwrap();
    assert_eq!(summary["params"]["preferred"], "transposed_minus");
    // The printed presentation is not satisfied by either variant.
    assert_eq!(summary["status"], "fail");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn single_variant_runs_only_that_variant() {
    let out = tyd(&["check", "ty-phi", "--variant", "transposed_minus"]);
    let r = report(&out);
    assert!(r["entries"].as_array().unwrap().iter().all(|e| e["params"]["variant"] == "transposed_minus"));
}

#[test]
fn reports_are_deterministic_across_runs_and_jobs() {
    let args = ["check", "typeA,L,mini,appendixA,props", "--modes", "3", "--seed", "11"];
    let a = tyd(&[&args[..], &["--jobs", "8"]].concat());
    let b = tyd(&[&args[..], &["--jobs", "8"]].concat());
    let c = tyd(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let d = tyd(&["check", "props", "--seed", "12"]);
    assert_ne!(report(&d)["config"], report(&a)["config"]);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let path = scratch("report.json");
    let out = tyd(&["check", "mini", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["config"]["suites"][0], "mini");
}

#[test]
fn external_catalog_overrides_builtin() {
    let path = scratch("extra.sexp");
    std::fs::write(&path, "(relation h-commute ((i node) (j node)) (level lie) (= (lb (H i 1) (H j 0)) 0))\n").unwrap();
    let spec = format!("L={}", path.display());
    let out = tyd(&["check", "L", "--catalog", &spec]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    // H_{n,1} does not exist, so i = n drops out.
    assert_eq!(r["summary"]["total"], 20);
    assert_eq!(r["config"]["catalog_overrides"][0], "L");
}

#[test]
fn catalog_lint() {
    let good = scratch("good.sexp");
    std::fs::write(&good, "(relation a ((i node)) (level lie) (= (lb (H i 0) (H i 0)) 0))\n").unwrap();
    let bad = scratch("bad.sexp");
    std::fs::write(&bad, "(relation a ((i node)) (= (lb (H i 0)\n").unwrap();
    let out = tyd(&["catalog", "lint", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ok, 1 entries"));
    let out = tyd(&["catalog", "lint", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}
