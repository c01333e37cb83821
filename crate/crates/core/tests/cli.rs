//! The `spiderchain` binary: exit codes, reports and data files.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use spiderchain::SpiderParams;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// Run the binary; returns the exit code and the stdout report.
fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_spiderchain")).args(args).output().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report)
}

fn run_on(command: &str, spec: &str, extra: &[&str]) -> (i32, Value) {
    let input = data(spec);
    let mut args = vec![command, "--input", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn validate_writes_the_normalized_spec() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = run_on("validate", "three_leg_walk.json", &["--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["status"], "ok");
    let original = SpiderParams::from_json_str(&std::fs::read_to_string(data("three_leg_walk.json")).unwrap()).unwrap();
    let written = SpiderParams::from_json_str(&std::fs::read_to_string(dir.path().join("chain.json")).unwrap()).unwrap();
    assert_eq!(original, written);
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn invalid_spec_exits_2() {
    let (code, report) = run_on("validate", "bad_alpha.json", &[]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "Invalid");
    let violations = report["error"]["details"]["violations"].to_string();
    assert!(violations.contains("SumViolation"), "{violations}");
}

#[test]
fn missing_input_exits_3() {
    let (code, report) = run_on("analyze", "no_such_chain.json", &[]);
    assert_eq!(code, 3);
    assert_eq!(report["error"]["kind"], "InputNotFound");
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(run(&["analyze"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn analyze_constant_walk() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = run_on("analyze", "three_leg_walk.json", &["--nodes", "64", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &report["result"];
    assert_eq!(r["classification"], "positive_recurrent");
    let s = 41f64.sqrt();
    let want = [(19.0 - s) / 64.0, (19.0 - s) / 48.0, (95.0 - 5.0 * s) / 192.0];
    for key in ["closed_form", "convergents"] {
        for (got, w) in r["thresholds"][key]["h"].as_array().unwrap().iter().zip(want) {
            assert!((f(got) - w).abs() < 1e-12, "{key}: {got} vs {w}");
        }
    }
    assert!((f(&r["atoms"]["at_one"]["location"]) - 1.0).abs() < 1e-15);

    let (lo, hi) = (f(&r["support"]["lo"]), f(&r["support"]["hi"]));
    let mut reader = csv::Reader::from_path(dir.path().join("density.csv")).unwrap();
    assert_eq!(&reader.headers().unwrap()[0], "x");
    let xs: Vec<f64> = reader.records().map(|row| row.unwrap()[0].parse().unwrap()).collect();
    assert_eq!(xs.len(), 64);
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
    assert!(xs.iter().all(|&x| lo < x && x < hi));
}

#[test]
fn analyze_classifies() {
    let (code, report) = run_on("analyze", "null_recurrent.json", &["--nodes", "16"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["classification"], "null_recurrent");
    assert!(report["result"]["atoms"]["at_one"].is_null());
    assert!(report["result"]["atoms"]["at_z2"].is_null());
    let (_, report) = run_on("analyze", "transient.json", &["--nodes", "16"]);
    assert_eq!(report["result"]["classification"], "transient");
}

#[test]
fn analyze_general_chain() {
    let (code, report) = run_on("analyze", "prefix_chain.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["kind"], "general");
    assert_eq!(report["result"]["legs"].as_array().unwrap().len(), 3);
    assert_eq!(report["result"]["thresholds"]["feasible"], true);
}

#[test]
fn km_check_passes_and_fails_on_tolerance() {
    let (code, report) = run_on("km-check", "three_leg_walk.json", &["--steps", "6", "--grid-levels", "2"]);
    assert_eq!(code, 0);
    assert!(f(&report["result"]["max_error"]) < 1e-12);
    for row in report["result"]["table"].as_array().unwrap() {
        if row["n"] == 0 && row["i"] == row["j"] {
            assert!(f(&row["error"]) < 1e-13);
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let (code, report) = run_on(
        "km-check",
        "three_leg_walk.json",
        &["--steps", "6", "--grid-levels", "2", "--tol", "1e-20", "--out", dir.path().to_str().unwrap()],
    );
    assert_eq!(code, 1);
    assert_eq!(report["status"], "check_failed");
    assert!(dir.path().join("report.json").exists());
    assert!(dir.path().join("km_check.csv").exists());
}

#[test]
fn km_check_needs_a_weight() {
    let (code, report) = run_on("km-check", "prefix_chain.json", &[]);
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "UnsupportedWeight");
}

#[test]
fn factorize_feasible_and_infeasible() {
    let (code, report) = run_on("factorize", "three_leg_walk.json", &["--beta", "0.25,0.3,0.35"]);
    assert_eq!(code, 0);
    assert!(f(&report["result"]["residual"]) < 1e-12);

    let (code, report) = run_on("factorize", "three_leg_walk.json", &["--beta", "0.19,0.3,0.35"]);
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], "NotStochastic");
    assert_eq!(report["error"]["details"]["leg"], 1);

    let (code, _) = run_on("factorize", "three_leg_walk.json", &["--beta", "thresholds", "--levels", "200"]);
    assert_eq!(code, 0);

    let (code, _) = run_on("factorize", "three_leg_walk.json", &["--beta", "0.5,0.5,0.5"]);
    assert_eq!(code, 2);
}

#[test]
fn darboux_extra_transitions() {
    let (code, report) = run_on("darboux", "three_leg_walk.json", &["--beta", "0.25,0.3,0.35"]);
    assert_eq!(code, 0);
    let extra = &report["result"]["extra_transitions"];
    // Row-major; entry (0, 1) is d_{1,2} = beta_2 r_{1,1}.
    assert!((f(&extra["data"][1]) - 0.15).abs() < 1e-12);
    assert!(f(&report["result"]["max_row_sum_deviation"]) < 1e-12);
    assert_eq!(report["result"]["spectral"]["gram_check"]["pass"], true);
}

#[test]
fn simulate_is_deterministic() {
    let args = ["--paths", "200000", "--steps", "4", "--seed", "9"];
    let (code, first) = run_on("simulate", "three_leg_walk.json", &args);
    let (_, second) = run_on("simulate", "three_leg_walk.json", &args);
    assert_eq!(code, 0);
    assert_eq!(first["result"], second["result"]);
    assert!(f(&first["result"]["total_variation"]) < 0.005);
}
