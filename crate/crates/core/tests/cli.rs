//! Exit-code and output contract of the `zonoid` binary.
//!
//! 0: all checks pass. 1: a statistical check fails. 2: invalid input of any
//! kind. 3: the limiting variance is degenerate.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let dir = tmp("cli_configs");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], config: &PathBuf, out: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zonoid"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(tmp(out))
        .output()
        .unwrap()
}

fn bundled(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

#[test]
fn passing_run_exits_zero_and_reports_checks() {
    let out = run(&["exact"], &bundled("exact.json"), "cli_pass");
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("check subset_identity_residual: pass"));
    assert!(stdout.contains("status: pass"));
    assert!(stdout.contains("wrote "));
}

#[test]
fn malformed_json_exits_two() {
    let cfg = write_config("garbage.json", "{ not json ");
    let out = run(&["exact"], &cfg, "cli_garbage");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("error:"));
}

#[test]
fn unknown_field_exits_two() {
    let cfg = write_config(
        "unknown_field.json",
        r#"{
            "distribution": { "kind": "gaussian_std", "d": 2 },
            "valuation": { "kind": "intrinsic", "j": 1 },
            "p": 2,
            "reps": 100,
            "bogus": true
        }"#,
    );
    let out = run(&["theorem1"], &cfg, "cli_unknown");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_file_exits_two() {
    let cfg = tmp("does_not_exist.json");
    let out = run(&["zonoid"], &cfg, "cli_missing");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_flag_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_zonoid"))
        .arg("clt")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_replication_exits_two() {
    let cfg = write_config(
        "one_rep.json",
        r#"{
            "distribution": { "kind": "gaussian_std", "d": 2 },
            "valuation": { "kind": "intrinsic", "j": 1 },
            "p": 2,
            "reps": 1
        }"#,
    );
    let out = run(&["theorem1"], &cfg, "cli_one_rep");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn order_below_degree_exits_two() {
    let cfg = write_config(
        "p_below_j.json",
        r#"{
            "distribution": { "kind": "gaussian_std", "d": 2 },
            "valuation": { "kind": "intrinsic", "j": 2 },
            "p": 1,
            "reps": 100
        }"#,
    );
    let out = run(&["theorem1"], &cfg, "cli_p_below_j");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_directions_exits_two() {
    let cfg = write_config(
        "no_directions.json",
        r#"{
            "distribution": { "kind": "gaussian_std", "d": 2 },
            "directions": 0,
            "empirical_n": 64
        }"#,
    );
    let out = run(&["zonoid"], &cfg, "cli_no_dirs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_probabilities_exit_two() {
    let cfg = write_config(
        "bad_probs.json",
        r#"{
            "distribution": {
                "kind": "discrete",
                "d": 2,
                "atoms": [[1.0, 0.0], [0.0, 1.0]],
                "probs": [0.9, 0.3]
            },
            "valuation": { "kind": "intrinsic", "j": 1 },
            "n": 50,
            "reps": 16
        }"#,
    );
    let out = run(&["clt"], &cfg, "cli_bad_probs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_law_exits_three() {
    let out = run(&["clt"], &bundled("clt_single_atom.json"), "cli_degenerate");
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("status: degenerate"));
}

#[test]
fn seed_flag_overrides_config_seed() {
    let cfg = bundled("theorem1_discrete.json");
    let base = run(&["theorem1"], &cfg, "cli_seed_base");
    let reseeded = Command::new(env!("CARGO_BIN_EXE_zonoid"))
        .args(["theorem1", "--seed", "777", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp("cli_seed_override"))
        .output()
        .unwrap();
    assert_eq!(base.status.code(), Some(0));
    assert_eq!(reseeded.status.code(), Some(0));
    let a: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(tmp("cli_seed_base").join("theorem1.json")).unwrap(),
    )
    .unwrap();
    let b: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(tmp("cli_seed_override").join("theorem1.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(b["config"]["seed"]["master_seed"], 777);
    assert_ne!(
        a["report"]["estimate"]["mean"],
        b["report"]["estimate"]["mean"],
        "a fresh seed must move the estimate"
    );
}

#[test]
fn rerun_with_same_config_is_byte_identical() {
    let cfg = bundled("clt_single_atom.json");
    for name in ["cli_rerun_a", "cli_rerun_b"] {
        let out = run(&["clt"], &cfg, name);
        assert_eq!(out.status.code(), Some(3));
    }
    for artifact in ["clt.json", "clt_deviations.csv"] {
        let a = fs::read(tmp("cli_rerun_a").join(artifact)).unwrap();
        let b = fs::read(tmp("cli_rerun_b").join(artifact)).unwrap();
        assert_eq!(a, b, "{artifact} changed between identical runs");
    }
}
