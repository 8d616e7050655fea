use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pdboundary")
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn exec(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(bin()).args(args).output().expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn descriptor(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run_with(sub: &str, input: &Path, extra: &[&str]) -> Run {
    let mut args = vec![sub, "--input", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    exec(&args)
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn chain_green_csv_is_min() {
    let dir = TempDir::new().unwrap();
    let d = descriptor(&dir, "g.json", r#"{"network": {"type": "chain", "n": 50}, "pairs": "all"}"#);
    let r = run_with("network-green", &d, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("i,j,green\n"));
    let rows = csv_rows(&r.stdout);
    assert_eq!(rows.len(), 51 * 51);
    for row in rows {
        let (i, j): (usize, usize) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        let g: f64 = row[2].parse().unwrap();
        assert!((g - i.min(j) as f64).abs() <= 1e-10, "G({i},{j}) = {g}");
    }
}

#[test]
fn csv_uses_seventeen_significant_digits() {
    let dir = TempDir::new().unwrap();
    let d = descriptor(&dir, "g.json", r#"{"network": {"type": "star", "spokes": 3}, "pairs": [[1, 1]]}"#);
    let r = run_with("network-green", &d, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let value = &csv_rows(&r.stdout)[0][2];
    let mantissa = value.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{value}");
}

#[test]
fn drury_arveson_monte_carlo_order_check() {
    let dir = TempDir::new().unwrap();
    let d = descriptor(
        &dir,
        "o.json",
        r#"{"drury_arveson": {"k": 2, "points": 10, "nodes": 100000}, "seed": 7}"#,
    );
    let r = run_with("order-check", &d, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["holds"], true);
    assert!(v["margin"].as_f64().unwrap() >= -1e-8);
}

#[test]
fn negative_weight_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let d = descriptor(
        &dir,
        "c.json",
        r#"{
            "setup": {"family": "custom", "kernel": {"family": "min"},
                      "weights": [1.0, -0.5], "features": [[[1, 0], [0, 0]], [[1, 0], [1, 0]]]},
            "points": [1, 2]
        }"#,
    );
    let r = run_with("boundary-certify", &d, &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("weights must be positive"), "{}", r.stderr);

    let f = descriptor(
        &dir,
        "f.json",
        r#"{"kernel": {"family": "min"}, "points": [1, 2], "targets": [[1, 0], [2, 0]],
            "weights": [1, -1], "beta": 0.1}"#,
    );
    let r = run_with("fit", &f, &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("weights must be positive"), "{}", r.stderr);
}

#[test]
fn unknown_field_is_named() {
    let dir = TempDir::new().unwrap();
    let d = descriptor(&dir, "u.json", r#"{"level": 4, "depth": 2, "tolerance": 1e-3}"#);
    let r = run_with("cantor-spectral", &d, &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("tolerance"), "{}", r.stderr);

    let d = descriptor(
        &dir,
        "n.json",
        r#"{"network": {"type": "chain", "n": 3, "conductance": 2}, "pairs": "all"}"#,
    );
    let r = run_with("network-green", &d, &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("conductance") && r.stderr.contains("network"), "{}", r.stderr);
}

#[test]
fn malformed_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.json");
    assert_eq!(run_with("gram", &missing, &[]).code, 1);

    let d = descriptor(&dir, "bad.json", "{not json");
    assert_eq!(run_with("gram", &d, &[]).code, 1);

    assert_eq!(exec(&["no-such-command", "--input", "x"]).code, 1);

    let d = descriptor(&dir, "g.json", r#"{"kernel": {"family": "min"}, "points": [1, 2]}"#);
    assert_eq!(run_with("gram", &d, &["--tol", "-1"]).code, 1);
}

#[test]
fn failed_certificate_exits_two_and_keeps_the_artifact() {
    let dir = TempDir::new().unwrap();
    // A coarser grid only dominates the chain kernel, so equality fails.
    let d = descriptor(
        &dir,
        "b.json",
        r#"{"setup": {"family": "chain", "n": 8, "step": 2.0}, "points": {"range": [0, 8]}}"#,
    );
    let out = dir.path().join("cert.json");
    let r = run_with("boundary-certify", &d, &["--output", out.to_str().unwrap()]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert!(r.stderr.contains("residual"), "{}", r.stderr);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["is_boundary"], false);
    assert!(v["max_equality_residual"].as_f64().unwrap() > 0.1);
}

#[test]
fn sidecar_holds_the_timestamps() {
    let dir = TempDir::new().unwrap();
    let d = descriptor(&dir, "g.json", r#"{"kernel": {"family": "min"}, "points": {"range": [1, 3]}}"#);
    let out = dir.path().join("gram.csv");
    let r = run_with("gram", &d, &["--output", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("gram.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["subcommand"], "gram");
    assert_eq!(meta["exit_code"], 0);
    assert!(meta["started_unix"].as_f64().unwrap() > 0.0);
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 10);
}

#[test]
fn seed_flag_overrides_descriptor() {
    let dir = TempDir::new().unwrap();
    let d = descriptor(
        &dir,
        "s.json",
        r#"{"kernel": {"family": "min"}, "points": {"range": [1, 3]}, "samples": 4, "seed": 1}"#,
    );
    let a = run_with("gp-sample", &d, &[]).stdout;
    let b = run_with("gp-sample", &d, &["--seed", "1"]).stdout;
    let c = run_with("gp-sample", &d, &["--seed", "2"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn tol_flag_scales_tolerances() {
    let dir = TempDir::new().unwrap();
    let d = descriptor(
        &dir,
        "i.json",
        r#"{"depth": 4, "level": 2, "pairs": [[[0.7, 0.1], [-0.3, 0.6]]]}"#,
    );
    // Level 2 is too coarse for depth 4 (residual near 2e-3).
    let strict = run_with("cantor-identity", &d, &[]);
    assert_eq!(strict.code, 2, "{}", strict.stderr);
    let loose = run_with("cantor-identity", &d, &["--tol", "1e6"]);
    assert_eq!(loose.code, 0, "{}", loose.stderr);
    assert_eq!(strict.stdout, loose.stdout);
}
