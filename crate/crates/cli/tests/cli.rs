//! End-to-end tests that spawn the `rotdist` binary and check the
//! record format, exit codes, and determinism of its output.

use std::path::Path;
use std::process::{Command, Output};

fn rotdist(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotdist"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

/// Pull the numeric `"value"` field out of a one-line record.
fn value_field(line: &str) -> f64 {
    let start = line.find("\"value\":").expect("record should have a value") + 8;
    let rest = &line[start..];
    let end = rest.find('}').unwrap_or(rest.len());
    rest[..end].trim().parse().expect("value should parse as f64")
}

fn write_identity(dir: &Path, name: &str, n: usize) {
    let mut text = String::new();
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                text.push(' ');
            }
            text.push_str(if i == j { "1" } else { "0" });
        }
        text.push('\n');
    }
    std::fs::write(dir.join(name), text).unwrap();
}

fn write_z_quarter_turn(dir: &Path, name: &str) {
    let t = std::f64::consts::FRAC_PI_2;
    let text = format!(
        "{} {} 0\n{} {} 0\n0 0 1\n",
        t.cos(),
        -t.sin(),
        t.sin(),
        t.cos()
    );
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify",
        "--suite",
        "conjugation",
        "--n",
        "3",
        "--samples",
        "10",
        "--seed",
        "7",
    ];
    let first = rotdist(dir.path(), &args);
    let second = rotdist(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("\"pass\":true"));
}

#[test]
fn quarter_turn_distance_matches_the_direct_subtraction_value() {
    let dir = tempfile::tempdir().unwrap();
    write_identity(dir.path(), "A.mat", 3);
    write_z_quarter_turn(dir.path(), "B.mat");
    let out = rotdist(
        dir.path(),
        &["dist", "--norm", "fro", "--f", "zminus1", "A.mat", "B.mat"],
    );
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    assert!(line.starts_with("{\"command\":\"dist\",\"inputs\":[\"A.mat\",\"B.mat\"],\"value\":"));
    // ‖I − R_z(π/2)‖_F = 2·√2·sin(π/4) = 2 exactly.
    assert!((value_field(&line) - 2.0).abs() <= 1e-12);
}

#[test]
fn exp_then_log_roundtrip_through_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let entries = [0.0, 0.3, -0.1, -0.3, 0.0, 0.2, 0.1, -0.2, 0.0];
    std::fs::write(
        dir.path().join("S.mat"),
        "0 0.3 -0.1\n-0.3 0 0.2\n0.1 -0.2 0\n",
    )
    .unwrap();
    let exp = rotdist(dir.path(), &["exp", "S.mat", "--out", "E.mat"]);
    assert_eq!(exp.status.code(), Some(0));
    let log = rotdist(dir.path(), &["log", "E.mat", "--out", "L.mat"]);
    assert_eq!(log.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("L.mat")).unwrap();
    let back: Vec<f64> = text
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(back.len(), entries.len());
    for (orig, rt) in entries.iter().zip(&back) {
        assert!((orig - rt).abs() <= 1e-9, "roundtrip drift: {orig} vs {rt}");
    }
}

#[test]
fn youla_reports_the_basis_and_descending_angles() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("X.mat"), "0 3\n-3 0\n").unwrap();
    let out = rotdist(dir.path(), &["youla", "X.mat"]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    assert!(line.contains("\"lambdas\":[3.0000000000000000e0]"));
    assert!(line.contains(
        "\"q\":[[1.0000000000000000e0,0.0000000000000000e0],\
         [0.0000000000000000e0,1.0000000000000000e0]]"
    ));
}

#[test]
fn missing_input_file_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    write_identity(dir.path(), "A.mat", 3);
    let out = rotdist(dir.path(), &["dist", "nope.mat", "A.mat"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.mat"));
}

#[test]
fn malformed_matrix_file_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.mat"), "1 0\n0 banana\n").unwrap();
    write_identity(dir.path(), "A.mat", 2);
    let out = rotdist(dir.path(), &["dist", "bad.mat", "A.mat"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn non_rotation_input_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("scaled.mat"), "2 0\n0 2\n").unwrap();
    write_identity(dir.path(), "A.mat", 2);
    let out = rotdist(dir.path(), &["dist", "scaled.mat", "A.mat"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn failing_suite_exits_with_verification_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotdist(
        dir.path(),
        &[
            "verify", "--suite", "jordan", "--n", "3", "--samples", "5", "--seed", "1",
            "--tol", "1e-30",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"pass\":false"));
}

#[test]
fn applyform_with_default_conjugators_reproduces_the_input() {
    let dir = tempfile::tempdir().unwrap();
    write_z_quarter_turn(dir.path(), "B.mat");
    let out = rotdist(dir.path(), &["applyform", "--form", "a", "B.mat"]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    let original = std::fs::read_to_string(dir.path().join("B.mat")).unwrap();
    let entries: Vec<f64> = original
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    // Spot-check the (1,0) entry, sin(π/2) = 1, survives untouched.
    assert!((entries[3] - 1.0).abs() < 1e-15);
    assert!(line.contains("\"command\":\"applyform\""));
    assert!(line.contains("1.0000000000000000e0"));
}

#[test]
fn checkf_passes_for_both_admissible_symbols() {
    let dir = tempfile::tempdir().unwrap();
    for symbol in ["log", "zminus1"] {
        let out = rotdist(dir.path(), &["checkf", "--f", symbol, "--grid", "1024"]);
        assert_eq!(out.status.code(), Some(0), "symbol {symbol}");
        assert!(stdout(&out).contains("\"all_pass\":true"));
    }
}

#[test]
fn maptable_suite_passes_on_a_consistent_table_file() {
    let dir = tempfile::tempdir().unwrap();
    // Table for plain conjugation by the identity: outputs equal inputs.
    let t = 0.4_f64;
    let block = format!(
        "{} {} 0\n{} {} 0\n0 0 1\n",
        t.cos(),
        -t.sin(),
        t.sin(),
        t.cos()
    );
    let mut table = String::new();
    for angle_scale in 1..=3 {
        let s = t * angle_scale as f64;
        let b = format!(
            "{} {} 0\n{} {} 0\n0 0 1\n",
            s.cos(),
            -s.sin(),
            s.sin(),
            s.cos()
        );
        table.push_str(&b);
        table.push('\n');
        table.push_str(&b);
        table.push('\n');
    }
    let _ = block;
    std::fs::write(dir.path().join("table.mat"), table).unwrap();
    let out = rotdist(
        dir.path(),
        &[
            "verify",
            "--suite",
            "maptable",
            "--table",
            "table.mat",
            "--samples",
            "50",
            "--seed",
            "3",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    assert!(line.contains("\"inputs\":[\"table.mat\"]"));
    assert!(line.contains("\"suite\":\"maptable\""));
    assert!(line.contains("\"pass\":true"));
}
