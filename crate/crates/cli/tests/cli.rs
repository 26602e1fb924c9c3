//! Exit codes and output of the `lubgap` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn lubgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lubgap"))
        .args(args)
        .output()
        .unwrap()
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
        .display()
        .to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lubgap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn constants_prints_table() {
    let out = lubgap(&["constants", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "gamma_12,5e-1"), "{text}");
}

#[test]
fn bad_m_is_a_computation_error() {
    assert_eq!(lubgap(&["constants", "--m", "0.5"]).status.code(), Some(2));
}

#[test]
fn missing_config_is_a_config_error() {
    let out = lubgap(&["force", "--config", "/nonexistent/lubgap.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_config_names_the_line() {
    let path = scratch("bad.toml");
    std::fs::write(&path, "[problem]\nmu = \"x\"\n").unwrap();
    let out = lubgap(&["force", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn force_writes_csv_to_stdout() {
    let out = lubgap(&[
        "force",
        "--config",
        &config("squeeze_m2.toml"),
        "--eps",
        "1e-3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# lubgap-report v1\n"));
    assert_eq!(text.lines().count(), 2 + 6 * 8);
}

#[test]
fn sweep_needs_a_sweep_section() {
    let out = lubgap(&["sweep", "--config", &config("flat_cap.toml")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_reports_through_exit_status() {
    let json = scratch("bc.json");
    let out = lubgap(&[
        "verify",
        "bc",
        "--config",
        &config("planar_m2.toml"),
        "--eps",
        "1e-3",
        "--out-json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(v["verification"]["passed"], true);
    let out = lubgap(&[
        "verify",
        "dual",
        "--config",
        &config("squeeze_m2.toml"),
        "--eps",
        "1e-3",
    ]);
    assert_eq!(out.status.code(), Some(3));
}
