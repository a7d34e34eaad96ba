//! End-to-end checks of the binary: exit codes, serialization formats and
//! output determinism across thread counts.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relscatter"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const SMALL_SOLVE: &str = r#"
[grid]
r_dom = 3.0
n_r = 8
n_ang = 6
n_phi = 12

[potential]
c = 0.02
sigma = 4.0

[solver]
mode = "born"
lambda = 1.0
"#;

#[test]
fn eval_kernel_emits_json_rows() {
    let out = bin()
        .args(["eval-kernel", "--lambda", "1", "--sign", "+", "--r", "2", "--r", "3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let lines: Vec<&str> = std::str::from_utf8(&out.stdout).unwrap().trim().lines().collect();
    assert_eq!(lines.len(), 2);
    let row: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(row["sign"], "+");
    assert_eq!(row["r"], 2.0);
    let riesz = row["riesz"].as_f64().unwrap();
    let expect = 1.0 / (2.0 * std::f64::consts::PI.powi(2) * 4.0);
    assert!((riesz - expect).abs() < 1e-15 * expect);
    for key in ["wave_re", "wave_im", "correction", "lambda"] {
        assert!(row[key].is_number(), "missing {key}");
    }
}

#[test]
fn eval_kernel_rejects_bad_sign() {
    let out = bin()
        .args(["eval-kernel", "--lambda", "1", "--sign", "x", "--r", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_rejects_inadmissible_sigma() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(&cfg, "[potential]\nsigma = 1.5\n");
    let out = bin().args(["solve", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("exceed 2"), "{err}");
}

fn run_solve(cfg: &Path, csv: &Path, threads: &str) -> Output {
    bin()
        .args(["solve", "--config"])
        .arg(cfg)
        .arg("--output")
        .arg(csv)
        .env("RELSCATTER_THREADS", threads)
        .output()
        .unwrap()
}

#[test]
fn solve_writes_csv_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(&cfg, SMALL_SOLVE);
    let (csv1, csv2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let out = run_solve(&cfg, &csv1, "1");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let meta: serde_json::Value =
        serde_json::from_str(std::str::from_utf8(&out.stdout).unwrap().trim()).unwrap();
    assert_eq!(meta["mode"], "born");
    assert!(meta["residual"].as_f64().unwrap() < 1e-6);

    let out2 = run_solve(&cfg, &csv2, "4");
    assert!(out2.status.success());
    let (a, b) = (std::fs::read(&csv1).unwrap(), std::fs::read(&csv2).unwrap());
    assert_eq!(a, b, "CSV output depends on thread count");

    let text = String::from_utf8(a).unwrap();
    let nodes = meta["nodes"].as_u64().unwrap() as usize;
    let rows: Vec<&str> = text.trim().lines().collect();
    assert_eq!(rows.len(), nodes);
    for field in rows[0].split(',') {
        // 17 significant digits in scientific notation
        let mantissa = field.split('e').next().unwrap();
        let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
        assert_eq!(digits, 17, "bad field {field}");
        field.parse::<f64>().unwrap();
    }
    assert_eq!(rows[0].split(',').count(), 5);
}

#[test]
fn verify_spectral_suite_passes_and_reports() {
    let out = bin().args(["verify", "--suite", "spectral"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut seen = 0;
    for line in stdout.trim().lines() {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(row["suite"], "spectral");
        assert_eq!(row["pass"], true, "{row}");
        seen += 1;
    }
    assert!(seen >= 2);
}

#[test]
fn verify_unknown_suite_is_config_error() {
    let out = bin().args(["verify", "--suite", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_merges_with_last_wins() {
    let dir = tempfile::tempdir().unwrap();
    let (f1, f2) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    write(
        &f1,
        r#"{"suite":"s","check":"alpha","value":1.0,"bound":2.0,"pass":true}
{"suite":"s","check":"beta","value":5.0,"bound":2.0,"pass":false}
"#,
    );
    write(
        &f2,
        r#"{"suite":"s","check":"beta","value":1.5,"bound":2.0,"pass":true}
"#,
    );
    let out = bin().arg("report").arg(&f1).arg(&f2).output().unwrap();
    assert!(out.status.success());
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("s/alpha"));
    assert!(table.contains("s/beta"));
    // duplicate resolved by the later file
    assert!(table.lines().filter(|l| l.contains("s/beta")).all(|l| l.contains("pass")));
    let warn = String::from_utf8(out.stderr).unwrap();
    assert!(warn.contains("duplicate"), "{warn}");
}

#[test]
fn report_without_inputs_is_config_error() {
    let out = bin().arg("report").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
