use std::process::{Command, Output};

use serde_json::Value;

fn oredil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oredil")).args(args).output().expect("binary runs")
}

fn json_report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn all_suites_pass() {
    let out = oredil(&["all", "--samples", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn bc_json_report_has_no_failures() {
    let out = oredil(&["bc", "--nmax", "12", "--Nmax", "12", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json_report(&out);
    assert_eq!(rep["suite"], "bc");
    assert_eq!(rep["failures"].as_array().map(Vec::len), Some(0));
    assert!(rep["cases"].as_u64().unwrap() > 0);
    assert!(rep["wall_time_ms"].is_u64());

    let verify = oredil(&["bc", "verify", "--nmax", "4", "--Nmax", "4", "--json"]);
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(oredil(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(oredil(&[]).status.code(), Some(2));
    assert_eq!(oredil(&["limit", "--samples", "many"]).status.code(), Some(2));
    assert_eq!(oredil(&["limit", "--instance", "nope"]).status.code(), Some(2));
}

#[test]
fn perturbed_instances_exit_1_with_witness() {
    for (suite, instance) in [("cocycle", "perturbed"), ("limit", "collapse"), ("bc", "off-by-one")] {
        let out = oredil(&[suite, "--instance", instance, "--samples", "20", "--nmax", "4", "--Nmax", "4", "--json"]);
        assert_eq!(out.status.code(), Some(1), "{suite} {instance}");
        let rep = json_report(&out);
        let failures = rep["failures"].as_array().unwrap();
        assert!(!failures.is_empty());
        assert!(failures.iter().all(|f| f["case"].is_string() && !f["witness"].is_null()));
    }
}

#[test]
fn reports_are_deterministic_given_seed() {
    let strip = |out: &Output| {
        let mut v = json_report(out);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    let args = ["limit", "--instance", "collapse", "--samples", "30", "--seed", "3", "--json"];
    assert_eq!(strip(&oredil(&args)), strip(&oredil(&args)));
    let args = ["crossprod", "--samples", "10", "--seed", "3", "--nmax", "6", "--Nmax", "6", "--json"];
    assert_eq!(strip(&oredil(&args)), strip(&oredil(&args)));
}

#[test]
fn text_report_lists_suite() {
    let out = oredil(&["ore", "--instance", "natmul", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ore: "));
}
