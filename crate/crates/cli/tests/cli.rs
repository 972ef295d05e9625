//! End-to-end tests of the qrobs binary: file outputs, report output,
//! exit codes and idempotence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qrobs(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrobs"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qrobs-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("create temp dir");
    dir
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

const IDENTITY_JSON: &str = r#"{
  "circuit": "bell_phi_plus",
  "channel": "bit_flip",
  "seed": 0,
  "epochs": 0,
  "learning_rate": 0.1,
  "qubit_observables": [
    {"coeffs": [1.0, 0.0, 0.0, 0.0]},
    {"coeffs": [1.0, 0.0, 0.0, 0.0]}
  ],
  "final_loss": 0.0
}
"#;

#[test]
fn toy_writes_csv_and_is_idempotent() {
    let dir = tmp_dir("toy");
    let out = qrobs(&["toy", "--out", "."], &dir);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(dir.join("toy.csv")).expect("toy.csv exists");
    assert!(csv.starts_with("p,exp_zz,exp_xx,exp_hh,exp_o_optimized\n"));
    assert_eq!(csv.lines().count(), 26);

    // Re-running produces byte-identical output.
    let rerun = qrobs(&["toy", "--out", "."], &dir);
    assert_eq!(code(&rerun), 0);
    assert_eq!(fs::read_to_string(dir.join("toy.csv")).unwrap(), csv);
}

#[test]
fn train_writes_converged_observable() {
    let dir = tmp_dir("train");
    let out = qrobs(
        &[
            "train",
            "--circuit",
            "bell_phi_plus",
            "--channel",
            "depolarizing",
            "--seed",
            "42",
            "--out",
            ".",
        ],
        &dir,
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let text = fs::read_to_string(dir.join("bell_phi_plus__depolarizing.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["circuit"], "bell_phi_plus");
    assert_eq!(parsed["epochs"], 300);
    assert!(parsed["final_loss"].as_f64().unwrap() <= 1e-4);
    assert_eq!(parsed["loss_history"].as_array().unwrap().len(), 301);

    // Identical invocation rewrites identical bytes.
    let rerun = qrobs(
        &[
            "train",
            "--circuit",
            "bell_phi_plus",
            "--channel",
            "depolarizing",
            "--seed",
            "42",
            "--out",
            ".",
        ],
        &dir,
    );
    assert_eq!(code(&rerun), 0);
    assert_eq!(
        fs::read_to_string(dir.join("bell_phi_plus__depolarizing.json")).unwrap(),
        text
    );
}

#[test]
fn unknown_names_and_bad_flags_exit_one() {
    let dir = tmp_dir("badargs");
    let out = qrobs(
        &["train", "--circuit", "ghz", "--channel", "depolarizing"],
        &dir,
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown circuit"));

    let out = qrobs(
        &["train", "--circuit", "qft2", "--channel", "cosmic_rays"],
        &dir,
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown channel"));

    let out = qrobs(
        &[
            "train",
            "--circuit",
            "qft2",
            "--channel",
            "bit_flip",
            "--grad-mode",
            "newton",
        ],
        &dir,
    );
    assert_eq!(code(&out), 1);

    let out = qrobs(
        &[
            "train",
            "--circuit",
            "qft2",
            "--channel",
            "bit_flip",
            "--epochs",
            "0",
        ],
        &dir,
    );
    assert_eq!(code(&out), 1);

    // Missing required flags are validation failures too.
    let out = qrobs(&["train"], &dir);
    assert_eq!(code(&out), 1);

    let out = qrobs(&["no-such-command"], &dir);
    assert_eq!(code(&out), 1);
}

#[test]
fn check_reports_identity_as_invariant() {
    let dir = tmp_dir("check");
    fs::write(dir.join("id.json"), IDENTITY_JSON).unwrap();

    let out = qrobs(
        &[
            "check",
            "--observable",
            "id.json",
            "--circuit",
            "bell_phi_plus",
            "--channel",
            "bit_flip",
        ],
        &dir,
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("check prints JSON");
    assert!(report["sum_residual"].as_f64().unwrap() < 1e-12);
    assert!(report["state_gap"].as_f64().unwrap() < 1e-12);
    for residual in report["per_kraus_residuals"].as_array().unwrap() {
        assert!(residual.as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn check_missing_or_malformed_observable_exits_one() {
    let dir = tmp_dir("checkbad");
    let out = qrobs(
        &[
            "check",
            "--observable",
            "absent.json",
            "--circuit",
            "qft2",
            "--channel",
            "bit_flip",
        ],
        &dir,
    );
    assert_eq!(code(&out), 1);

    fs::write(dir.join("broken.json"), "{\"circuit\": 7}").unwrap();
    let out = qrobs(
        &[
            "check",
            "--observable",
            "broken.json",
            "--circuit",
            "qft2",
            "--channel",
            "bit_flip",
        ],
        &dir,
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
}

#[test]
fn props_reports_identity_spectrum() {
    let dir = tmp_dir("props");
    fs::write(dir.join("id.json"), IDENTITY_JSON).unwrap();

    let out = qrobs(&["props", "--observable", "id.json"], &dir);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for value in report["eigenvalues"].as_array().unwrap() {
        assert!((value.as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
    assert!(report["hermiticity_residual"].as_f64().unwrap() < 1e-12);
    assert!((report["pauli_coefficients"][0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn train_all_then_cross_eval_pipeline() {
    let dir = tmp_dir("pipeline");
    let out = qrobs(&["train-all", "--seed", "42", "--out", "runs"], &dir);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let runs = dir.join("runs");
    let mut json_files: Vec<_> = fs::read_dir(&runs)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    json_files.sort();
    assert_eq!(json_files.len(), 31); // 30 observables + manifest
    assert!(json_files.contains(&"manifest.json".to_string()));
    assert!(json_files.contains(&"random_entangled__bit_flip.json".to_string()));

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(runs.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 42);
    assert_eq!(manifest["circuit_order"].as_array().unwrap().len(), 6);
    assert_eq!(manifest["channel_order"].as_array().unwrap().len(), 5);
    assert_eq!(manifest["noise_grid"]["rates"].as_array().unwrap().len(), 25);

    let out = qrobs(&["cross-eval", "--in", "runs", "--out", "reports"], &dir);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let cross = fs::read_to_string(dir.join("reports/crosseval.csv")).unwrap();
    assert!(cross.starts_with(
        "observable_circuit,observable_channel,eval_circuit,eval_channel,mean,std,min,max\n"
    ));
    assert_eq!(cross.lines().count(), 901);

    let hist = fs::read_to_string(dir.join("reports/histogram.csv")).unwrap();
    assert!(hist.starts_with("bin_lower,count\n"));
    let total: u64 = hist
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 900);

    // The input directory is untouched by cross-eval.
    let mut after: Vec<_> = fs::read_dir(&runs)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    after.sort();
    assert_eq!(after, json_files);

    // A directory missing one observable is rejected.
    fs::remove_file(runs.join("qft2__phase_flip.json")).unwrap();
    let out = qrobs(&["cross-eval", "--in", "runs", "--out", "reports2"], &dir);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("qft2__phase_flip.json"));
}

#[test]
fn help_exits_zero() {
    let dir = tmp_dir("help");
    let out = qrobs(&["--help"], &dir);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("train-all"));
}
