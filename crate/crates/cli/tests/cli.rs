//! End-to-end tests of the binary, configs and recipes.

use std::path::Path;
use std::process::Command;

use invset_cli::config::ExperimentConfig;
use invset_cli::recipes::{recipe, NAMES};
use invset_cli::run;
use invset_cli::verify::{qmf_criterion, qmf_fixtures};
use invset_core::TransitionFn;
use serde_json::Value;

fn invset(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_invset")).args(args).current_dir(dir).output().expect("binary runs")
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn recipes_round_trip_through_toml() {
    for name in NAMES {
        let cfg = recipe(name).unwrap();
        let text = cfg.to_toml().unwrap();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg, "{name}");
    }
}

#[test]
fn cos3_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&recipe("example-4-1").unwrap(), dir.path(), Some(dir.path())).unwrap();
    assert!(r.pass());
    let s = summary(dir.path());
    assert_eq!(s["set"]["exits"], "{1/6, 5/6}");
    assert_eq!(s["filter"]["invariance"]["pass"], true);
    assert!(dir.path().join("plot.gp").exists());
}

#[test]
fn shannon_recipe_reports_failing_cohen_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&recipe("shannon").unwrap(), dir.path(), Some(dir.path())).unwrap();
    let s = summary(dir.path());
    assert_eq!(s["set"]["exits"], "[3/8, 5/8)");
    assert_eq!(s["filter"]["invariance"]["pass"], true);
    // p(1/4) = 0 at ξ = 1/2 ∈ T, so the closed congruence set fails the condition.
    assert_eq!(s["cohen"]["pass"], false);
    assert_eq!(s["cohen"]["infimum"], 0.0);
    assert!(!r.pass());
}

#[test]
fn log_modulus_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&recipe("thm1-onethird").unwrap(), dir.path(), Some(dir.path())).unwrap();
    assert!(r.pass(), "{:?}", r.summary.checks);
    let s = summary(dir.path());
    assert_eq!(s["spectral"]["sum"]["upper"], 0.0);
    assert_eq!(s["spectral"]["sum"]["exact_zero_terms"], 129);
    let paths = std::fs::read_to_string(dir.path().join("paths.csv")).unwrap();
    // Every path is the deterministic 2-cycle, ending at 1/3 after an even number of steps.
    assert!(paths.lines().skip(1).all(|l| l.ends_with(",-1,1,3,0")), "{paths}");
    assert!(TransitionFn::from_json(&std::fs::read_to_string(dir.path().join("filter.json")).unwrap()).is_ok());
}

#[test]
fn simulate_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--filter", "haar", "--x0", "1/3", "--paths", "40", "--steps", "300", "--seed", "9"];
    let a = invset(&args, dir.path());
    let b = invset(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("path_id,t_absorbed,final_state_num,final_state_den,decouple_count\n"));
    assert_eq!(text.lines().count(), 41);
}

#[test]
fn simulate_requires_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = invset(&["simulate", "--filter", "haar", "--x0", "1/3"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn eval_product_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = invset(&["eval-product", "--filter", "cos3", "--x0", "1/3", "--k-max", "2"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,lower,upper,exact_zero,terms_used"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn run_config_file_and_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"
command = "pipeline"

[filter]
builtin = "haar"

[simulation]
x0 = "1/5"
paths = 30
steps = 200
seed = 3

[spectral]
x0 = "1/5"
k_max = 16
"#;
    std::fs::write(dir.path().join("exp.toml"), cfg).unwrap();
    let first = invset(&["run", "--config", "exp.toml", "--out", "a"], dir.path());
    let second = invset(&["run", "--config", "exp.toml", "--out", "b"], dir.path());
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert!(second.status.success());
    for f in ["paths.csv", "product.csv", "absorption.csv", "filter.csv", "summary.json"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn malformed_config_names_the_location() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "command = \"pipeline\"\n[filter]\nbuiltin = \"haar\"\nbogus = 1\n").unwrap();
    let out = invset(&["run", "--config", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.toml") && err.contains("line 4") && err.contains("bogus"), "{err}");
}

#[test]
fn analyze_subshift_lists_exit_words() {
    let dir = tempfile::tempdir().unwrap();
    let out = invset(&["analyze-subshift", "--forbidden", "00,11", "--depth", "3"], dir.path());
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exit_words"], serde_json::json!(["011", "100"]));
    assert_eq!(v["report"]["disjoint_from_exit_closure"], true);
}

#[test]
fn analyze_set_and_cohen_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = invset(&["analyze-set", "--set", r#"points = ["1/3", "2/3"]"#], dir.path());
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exits"], "{1/6, 5/6}");
    let out = invset(&["cohen", "--filter", "haar", "--t", "-1/2,1/2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn build_g_refuses_infinite_type() {
    let dir = tempfile::tempdir().unwrap();
    let out = invset(&["build-g", "--strict", "--generator", "example_3_1", "--truncation", "8"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("witness"));
    let out = invset(&["build-g", "--forbidden", "00,11", "--strict"], dir.path());
    assert!(out.status.success());
    assert!(invset_core::GFunction::from_json(&String::from_utf8(out.stdout).unwrap()).is_ok());
}

#[test]
fn tampered_filter_fails_the_residual_criterion() {
    let mut filters = qmf_fixtures();
    let (label, p) = filters.iter().find(|(_, p)| p.regions().is_some()).cloned().unwrap();
    let mut doc: Value = serde_json::from_str(&p.to_json().unwrap()).unwrap();
    let seg = &mut doc["segments"][0];
    let v = seg["value_lo"].as_f64().unwrap();
    seg["value_lo"] = serde_json::json!(v + 0.01);
    let tampered = TransitionFn::from_json(&doc.to_string()).unwrap();
    filters.push((format!("tampered {label}"), tampered));
    let (pass, detail) = qmf_criterion(&filters);
    assert!(!pass);
    assert!(detail.contains("tampered"), "{detail}");
}

#[test]
fn verify_binary_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let ok = invset(&["verify", "--level", "quick", "--criterion", "6"], dir.path());
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("criterion  6: PASS"));
    let bad = invset(&["verify", "--level", "quick", "--criterion", "2"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
}
