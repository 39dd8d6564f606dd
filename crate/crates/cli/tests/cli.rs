//! End-to-end tests of the `unruh` binary: exit codes, output formats,
//! determinism, environment handling.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn unruh() -> Command {
    Command::new(env!("CARGO_BIN_EXE_unruh"))
}

fn run(args: &[&str]) -> Output {
    unruh().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn hawking_outputs_expected_temperature() {
    let out = run(&["hawking", "--mass", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let t = v["temperature"].as_f64().unwrap();
    assert!((t - 1.0 / (8.0 * std::f64::consts::PI)).abs() < 1e-16);
    assert!(v.get("ratio").is_none());

    let out = run(&["hawking", "--kappa-gravity", "6.283185307179586", "--chi1", "2", "--chi2", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["temperature"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert!((v["ratio"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn hawking_rejects_ambiguous_source_with_exit_2() {
    let out = run(&["hawking", "--mass", "1", "--kappa-gravity", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["hawking"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_2() {
    let out = run(&["sweep", "--frequency", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn protocol_is_byte_identical_across_runs() {
    let args = [
        "protocol",
        "--model",
        "single",
        "--acceleration",
        "6.283185307179586",
        "--mu",
        "0.01",
        "--eta",
        "1.5707963267948966",
        "--shots",
        "2000",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    for field in [
        "parameter_true",
        "estimate_mean",
        "estimate_variance",
        "qfi_used",
        "crb_per_shot",
        "n_shots",
        "standard_error",
    ] {
        assert!(v.get(field).is_some(), "missing field {field}");
    }
}

#[test]
fn protocol_reads_parameter_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("params.json");
    std::fs::write(
        &path,
        r#"{"model": "two", "acceleration": 6.283185307179586, "mu": 0.01, "theta": 0.0, "shots": 500, "seed": 3}"#,
    )
    .unwrap();
    let out = run(&["protocol", "--params", path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n_shots"].as_u64(), Some(500));
}

#[test]
fn malformed_parameter_file_exits_2_with_line_diagnostic() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"model\": \"single\",\n  broken\n}\n").unwrap();
    let out = run(&["protocol", "--params", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "stderr: {}", stderr(&out));
}

#[test]
fn out_of_domain_argument_exits_2() {
    let out = run(&["protocol", "--model", "single", "--acceleration", "1", "--mu", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("mu"));
}

#[test]
fn sweep_writes_csv_and_metadata_and_roundtrips() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("fig.csv");
    let out = run(&[
        "sweep",
        "--model",
        "two",
        "--axis",
        "theta",
        "--points",
        "9",
        "--acceleration",
        "1",
        "--mu",
        "0.01",
        "--scale",
        "fig1",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let table = unruh_cli::sweep::parse_csv(&text).unwrap();
    assert_eq!(table.rows.len(), 9);
    assert!(table.has_concurrence);
    // re-rendering reproduces the file byte for byte
    assert_eq!(unruh_cli::sweep::to_csv(&table, unruh_cli::sweep::Axis::Theta), text);

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["model"], "two");
    assert_eq!(meta["scale"], "fig1");
    assert_eq!(meta["axis_range"]["points"], 9);
    assert!(meta["artifact_version"].is_string());
}

#[test]
fn sweep_two_points_yields_two_rows() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("s.csv");
    let out = run(&[
        "sweep", "--axis", "acceleration", "--a-min", "1", "--a-max", "2", "--points", "2",
        "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let table = unruh_cli::sweep::parse_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(table.rows.len(), 2);
}

#[test]
fn sweep_rejects_bad_range_with_exit_2() {
    let out = run(&["sweep", "--a-min", "5", "--a-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn env_var_overrides_default_output_directory() {
    let dir = TempDir::new().unwrap();
    let out = unruh()
        .args(["sweep", "--points", "3", "--a-min", "1", "--a-max", "2"])
        .env("UNRUH_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(dir.path().join("sweep.csv").exists());
    assert!(dir.path().join("sweep.meta.json").exists());
}

#[test]
fn validate_exits_zero_and_prints_one_line_per_check() {
    let out = run(&["validate"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let pass_lines = text.lines().filter(|l| l.starts_with("[PASS]")).count();
    assert!(pass_lines >= 6, "got:\n{text}");
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn max_reports_peak_in_json() {
    let out = run(&["max", "--model", "single", "--eta", "1.5707963267948966", "--mu", "0.01"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let a_max = v["a_max"].as_f64().unwrap();
    assert!((a_max - 1.686325).abs() < 1e-3);
    assert!(v["bracket_width"].as_f64().unwrap() < 1e-6);
    assert!(v["rival_peaks"].as_array().unwrap().is_empty());
}

#[test]
fn help_lists_all_verbs() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for verb in ["sweep", "max", "protocol", "hawking", "validate"] {
        assert!(text.contains(verb), "missing verb {verb}");
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_unruh")).exists());
}
