//! End-to-end runs of the `gradbound` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradbound"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout lines are json"))
        .collect()
}

#[test]
fn no_arguments_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_gradbound")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_oracle_reports_structured_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["solve", "--oracle", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(o.stderr.trim_ascii()).unwrap();
    assert_eq!(err["error"], "unknown_oracle");
}

#[test]
fn solve_with_auto_stepsize_writes_trace_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["solve", "--oracle", "quad:m=10,n=20,seed=1", "--variant", "gd", "--h", "auto", "--max-iters", "200", "--svg"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = &stdout_json(&o)[0];
    assert!(summary["h"].as_f64().unwrap() > 0.0);
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(csv.starts_with("k,f,fgap,grad_norm,dist_to_sol,reset_event\n"));
    assert_eq!(csv.lines().count(), 202);
    let cfg: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("config.json")).unwrap()).unwrap();
    assert_eq!(cfg["command"], "solve");
    assert!(dir.path().join("trace.svg").exists());
}

#[test]
fn auto_restart_interval_resolves() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["solve", "--oracle", "quad:m=10,n=20,seed=1", "--variant", "restart_fixed", "--K", "auto", "--max-iters", "50"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_linear_bound_passes_on_quadratic() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["verify", "--theorem", "thm2_linear", "--oracle", "quad:m=10,n=20,seed=2", "--variant", "gd", "--max-iters", "300"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = &stdout_json(&o)[0];
    assert_eq!(report["pass"], true);
    assert!(report["checked"].as_u64().unwrap() > 0);
}

#[test]
fn appendix_minimum_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["appendix", "--R", "1", "--nu", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let g = &stdout_json(&o)[0];
    assert!((g["min_value"].as_f64().unwrap() - 0.75).abs() < 1e-9);
}

#[test]
fn rates_recovers_synthetic_factor() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("k,f,fgap,grad_norm,dist_to_sol,reset_event\n");
    for k in 0..40 {
        let v = 0.8f64.powi(k);
        csv.push_str(&format!("{k},{v:e},{v:e},{v:e},,none\n"));
    }
    let trace = dir.path().join("synthetic.csv");
    std::fs::write(&trace, csv).unwrap();
    let o = run(
        dir.path(),
        &["rates", "--trace", trace.to_str().unwrap(), "--quantity", "gap", "--window", "5:35"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let fit = &stdout_json(&o)[0]["fit"];
    assert!((fit["fitted_factor"].as_f64().unwrap() - 0.8).abs() < 1e-9);

    let blank = run(dir.path(), &["rates", "--trace", trace.to_str().unwrap(), "--quantity", "dist"]);
    assert_eq!(blank.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"R": 2.0, "nu": 1.0, "grid_steps": 1000}"#).unwrap();
    let o = run(dir.path(), &["--config", cfg.to_str().unwrap(), "appendix"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)[0]["grid_steps"], 1000);

    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    let o = run(dir.path(), &["--config", cfg.to_str().unwrap(), "appendix"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn recover_reaches_tolerance_and_writes_curve() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["--seed", "3", "recover", "--m", "40", "--n", "80", "--k", "5", "--variant", "restart", "--max-iters", "50000"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let line = &stdout_json(&o)[0];
    assert_eq!(line["status"], "tol_reached");
    assert!(line["final_rel_error"].as_f64().unwrap() < 1e-6);
    assert!(dir.path().join("recovery_s3_restart.csv").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["--seed", "9", "solve", "--oracle", "quad:m=8,n=16,seed=4", "--variant", "skip", "--max-iters", "120"];
    let oa = run(a.path(), &args);
    let ob = run(b.path(), &args);
    assert_eq!(oa.stdout, ob.stdout);
    let ta = std::fs::read(a.path().join("trace.csv")).unwrap();
    let tb = std::fs::read(b.path().join("trace.csv")).unwrap();
    assert_eq!(ta, tb);
}

#[test]
fn full_size_skip_recovery_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["--seed", "1", "recover", "--m", "256", "--n", "512", "--k", "25", "--signal", "pm_one", "--variant", "skip"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let line = &stdout_json(&o)[0];
    assert_eq!(line["variant"], "adaptive(skip)");
    assert!(line["final_rel_error"].as_f64().unwrap() < 1e-6);
    let csv = std::fs::read_to_string(dir.path().join("recovery_s1_skip.csv")).unwrap();
    assert!(csv.starts_with("k,rel_error,primal_residual,reset_event\n"));
}
