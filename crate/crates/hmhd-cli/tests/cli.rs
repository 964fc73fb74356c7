//! Plumbing-level checks of the command-line tool: exit codes, manifests,
//! and run-to-run determinism.

use std::path::{Path, PathBuf};
use std::process::Command;

fn workspace_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hmhd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_to(config: &str, sub: &str, out: &Path) -> std::process::Output {
    run_cli(&[
        sub,
        "--config",
        workspace_config(config).to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
}

fn manifest(out: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(out.join("manifest.json")).expect("manifest exists");
    serde_json::from_str(&text).expect("manifest parses")
}

#[test]
fn zero_force_solves_to_zero_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to("solve_zero.toml", "solve", dir.path());
    assert_eq!(out.status.code(), Some(0));
    let m = manifest(dir.path());
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["subcommand"], "solve");
    assert!(m["outputs"].as_array().unwrap().len() >= 4);

    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("solve_report.json")).unwrap(),
    )
    .unwrap();
    for reading in report["besov"].as_array().unwrap() {
        assert_eq!(reading["value"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn oversized_data_exits_with_divergence_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to("solve_diverge.toml", "solve", dir.path());
    assert_eq!(out.status.code(), Some(2));
    let m = manifest(dir.path());
    assert_eq!(m["exit_code"], 2);
    assert!(m["error"].as_str().unwrap().contains("diverged"));
}

#[test]
fn missing_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_cli(&["solve", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(manifest(dir.path())["exit_code"], 1);
}

#[test]
fn unreadable_field_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_cli(&[
        "lp-norm",
        "--field",
        "/nonexistent/field.hmhd",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn infeasible_rows_are_recorded_without_failing_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to("inflate_paper_blocks.toml", "inflate", dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,epsilon,r,grid_N,recenter_shift,block_rule,norm_g_B031,norm_f_Bm231,\
         seminorm_Gn,seminorm_Un,feasible"
    );
    // The epsilon = 1 cases record r = 1 in every row.
    assert!(lines[1].starts_with("32,1.0,1.0,") && lines[1].ends_with("false"));
    assert!(lines[2].starts_with("5,1.0,1.0,") && lines[2].ends_with("true"));
}

#[test]
fn reruns_reproduce_identical_artifacts() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = run_to("inflate_paper_blocks.toml", "inflate", dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(dir_a.path().join("sweep.csv")).unwrap();
    let b = std::fs::read(dir_b.path().join("sweep.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_override_changes_the_ensemble() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let config = workspace_config("audit_cancellation.toml");
    for (dir, seed) in [(&dir_a, "0"), (&dir_b, "1000")] {
        let out = run_cli(&[
            "audit",
            "--config",
            config.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
            "--seed",
            seed,
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read_to_string(dir_a.path().join("cancellation.csv")).unwrap();
    let b = std::fs::read_to_string(dir_b.path().join("cancellation.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn manifest_references_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_to("solve_zero.toml", "solve", dir.path());
    assert_eq!(out.status.code(), Some(0));
    let m = manifest(dir.path());
    let outputs: Vec<PathBuf> = m["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| PathBuf::from(v.as_str().unwrap()))
        .collect();
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        if path.file_name().unwrap() == "manifest.json" {
            continue;
        }
        assert!(outputs.contains(&path), "orphan artifact {path:?}");
    }
    for path in &outputs {
        assert!(path.exists(), "dangling manifest entry {path:?}");
    }
}
