//! End-to-end tests of the `npspec` binary: exit codes, output formats,
//! determinism, and the documented oracle values.

use std::path::PathBuf;
use std::process::{Command, Output};

fn npspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_npspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn tmp_prefix(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("npspec-test-{tag}-{}", std::process::id()))
}

#[test]
fn ellipse_spectrum_leading_eigenvalue() {
    let out = npspec(&["spectrum", "--curve", r#"{"kind":"ellipse","a":2,"b":1}"#, "--N", "64"]);
    let v = stdout_json(&out);
    let lam1 = v["lambdas"][0].as_f64().unwrap();
    assert!((lam1.abs() - 1.0 / 6.0).abs() < 1e-10, "lambda_1 = {lam1}");
    assert_eq!(v["n_nodes"], 64);
}

#[test]
fn circle_spectrum_is_numerically_zero() {
    let out = npspec(&["spectrum", "--curve", r#"{"kind":"circle","r":1}"#, "--N", "64"]);
    let v = stdout_json(&out);
    for lam in v["lambdas"].as_array().unwrap() {
        assert!(lam.as_f64().unwrap().abs() <= 1e-12);
    }
    assert!(v["dropped_half"]["dist_to_half"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn invalid_grid_size_is_a_usage_error() {
    let out = npspec(&["spectrum", "--curve", r#"{"kind":"circle","r":1}"#, "--N", "15"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("[16, 4096]"), "stderr: {err}");
}

#[test]
fn invalid_floor_is_a_usage_error() {
    let out = npspec(&[
        "spectrum", "--curve", r#"{"kind":"circle","r":1}"#, "--floor", "1e-2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[1e-15, 1e-3]"));
}

#[test]
fn malformed_curve_is_a_usage_error() {
    let out = npspec(&["spectrum", "--curve", r#"{"kind":"blob"}"#, "--N", "64"]);
    assert_eq!(out.status.code(), Some(2));
    let out = npspec(&["spectrum", "--curve", r#"{"kind":"ellipse","a":1,"b":2}"#, "--N", "64"]);
    assert_eq!(out.status.code(), Some(2), "ellipse needs a > b");
}

#[test]
fn curve_can_come_from_a_file() {
    let path = tmp_prefix("curvefile").with_extension("json");
    std::fs::write(&path, r#"{"kind":"ellipse","a":2,"b":1}"#).unwrap();
    let out = npspec(&["spectrum", "--curve", path.to_str().unwrap(), "--N", "64"]);
    let v = stdout_json(&out);
    assert!((v["lambdas"][0].as_f64().unwrap().abs() - 1.0 / 6.0).abs() < 1e-10);
    std::fs::remove_file(&path).ok();
}

#[test]
fn output_is_deterministic() {
    let args = ["spectrum", "--curve", r#"{"kind":"limacon","A":0.4}"#, "--N", "64"];
    let a = npspec(&args);
    let b = npspec(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn grauert_reports_both_limacon_parametrizations() {
    let out = npspec(&["grauert", "--curve", r#"{"kind":"limacon","A":0.4}"#]);
    let v = stdout_json(&out);
    assert!((v["naive"]["value"].as_f64().unwrap() - 1.5_f64.ln()).abs() < 1e-9);
    assert!((v["optimal"]["value"].as_f64().unwrap() - 4.0_f64.ln()).abs() < 1e-9);
    assert!((v["trigpoly"]["value"].as_f64().unwrap() - 1.5_f64.ln()).abs() < 1e-9);
    assert_eq!(v["strip_upper"]["value"], "inf");
    assert!(v["eps_c_of_optimal"].as_f64().unwrap() > 0.0);
}

#[test]
fn grauert_circle_radius_is_infinite() {
    let out = npspec(&["grauert", "--curve", r#"{"kind":"circle","r":1}"#]);
    let v = stdout_json(&out);
    assert_eq!(v["closed_form"]["value"], "inf");
    assert_eq!(v["eps_c"], "inf");
}

#[test]
fn decay_ratio_near_one_on_the_ellipse() {
    let out = npspec(&["decay", "--curve", r#"{"kind":"ellipse","a":2,"b":1}"#, "--N", "128"]);
    let v = stdout_json(&out);
    let ratio = v["ratio"].as_f64().unwrap();
    assert!((0.99..=1.01).contains(&ratio), "ratio = {ratio}");
}

#[test]
fn decay_on_circle_flags_the_floor() {
    let out = npspec(&["decay", "--curve", r#"{"kind":"circle","r":1}"#, "--N", "64"]);
    let v = stdout_json(&out);
    assert!(v["fit"].is_null());
    assert_eq!(v["note"], "rate below floor everywhere");
}

#[test]
fn plot_writes_an_svg_next_to_the_data() {
    let prefix = tmp_prefix("plot");
    let out = npspec(&[
        "decay",
        "--curve", r#"{"kind":"ellipse","a":2,"b":1}"#,
        "--N", "64",
        "--out", prefix.to_str().unwrap(),
        "--plot",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(prefix.with_extension("svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polyline"));
    assert!(svg.contains("slope -eps_q"));
    let json = std::fs::read_to_string(prefix.with_extension("json")).unwrap();
    assert!(serde_json::from_str::<serde_json::Value>(&json).is_ok());
    std::fs::remove_file(prefix.with_extension("svg")).ok();
    std::fs::remove_file(prefix.with_extension("json")).ok();
}

#[test]
fn plot_without_out_is_a_usage_error() {
    let out = npspec(&[
        "spectrum", "--curve", r#"{"kind":"circle","r":1}"#, "--N", "32", "--plot",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_format_emits_rows() {
    let out = npspec(&[
        "spectrum", "--curve", r#"{"kind":"circle","r":1}"#, "--N", "32", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("index,lambda\n"));
    assert_eq!(text.lines().count(), 32); // header + 31 eigenvalues
}

#[test]
fn verify_filter_runs_the_selected_criterion() {
    let out = npspec(&["verify", "--only", "circle"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("circle-degeneracy"));
    assert!(text.contains("PASS"));
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn verify_unknown_filter_is_a_usage_error() {
    let out = npspec(&["verify", "--only", "no-such-criterion"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_cap_is_honored_and_validated() {
    let ok = Command::new(env!("CARGO_BIN_EXE_npspec"))
        .env("NPSPEC_THREADS", "1")
        .args(["spectrum", "--curve", r#"{"kind":"circle","r":1}"#, "--N", "32"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_npspec"))
        .env("NPSPEC_THREADS", "zero")
        .args(["spectrum", "--curve", r#"{"kind":"circle","r":1}"#, "--N", "32"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
