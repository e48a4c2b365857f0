//! End-to-end checks of the `sparsesum` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sparsesum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsesum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sum_prints_value_and_decomposition() {
    let out = sparsesum(&[
        "sum",
        "--p",
        "13",
        "--poly",
        "1,4;1,6;1,3;1,2",
        "--chi",
        "1",
        "--decomposed",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let (exact, dec) = (&v["value"], &v["decomposed"]);
    for i in 0..2 {
        assert!((exact[i].as_f64().unwrap() - dec[i].as_f64().unwrap()).abs() < 1e-9);
    }
    assert!(v["magnitude"].as_f64().unwrap() <= 6.0 * 13f64.sqrt());
}

#[test]
fn count_worked_d_times() {
    let out = sparsesum(&[
        "count",
        "--p",
        "13",
        "--quantity",
        "subgroup_energy",
        "--orders",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let record: Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert_eq!(record["quantity"], "subgroup_energy");
    assert_eq!(record["value"].as_f64(), Some(64.0));
    assert_eq!(record["status"], "pass");
}

#[test]
fn bounds_worked_example() {
    let out = sparsesum(&["bounds", "--p", "13", "--poly", "1,4;1,6;1,3;1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let gcd = v["bounds"]["gcd"]["value"].as_f64().unwrap();
    assert!((gcd - 22.49).abs() < 0.01);
    assert!(v["exact_magnitude"].is_null());
    assert_eq!(v["winner"], "trivial");
}

#[test]
fn compare_includes_exact_sum() {
    let out = sparsesum(&[
        "compare",
        "--p",
        "31",
        "--poly",
        "3,1;5,2;7,3;2,5",
        "--mode",
        "best",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(
        v["exact_magnitude"].as_f64().unwrap() <= v["bounds"]["weil"]["value"].as_f64().unwrap()
    );
    assert_eq!(v["mode"], "best");
}

#[test]
fn verify_single_instance() {
    let out = sparsesum(&[
        "verify",
        "--p",
        "31",
        "--poly",
        "3,1;5,2;7,3;2,5",
        "--chi",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let suites: Vec<&str> = lines.iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert_eq!(suites, ["identity", "weil", "bounds"]);
}

#[test]
fn verify_config_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"primes": {"list": [13, 31]}, "suites": ["identity", "weil", "energy", "ratio"]}"#,
    );
    let out_path = dir.path().join("out.csv");
    let out = sparsesum(&[
        "verify",
        "--config",
        &config,
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("seq,suite,quantity,"));
    assert!(text.lines().count() > 10);
}

#[test]
fn cauchy_energy_form_failure_exits_one() {
    // a triple where the energy form of the bound is violated
    let out = sparsesum(&[
        "count",
        "--p",
        "23",
        "--quantity",
        "cauchy_energy_form",
        "--orders",
        "11,1,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"fail\""));
}

#[test]
fn unknown_config_key_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"primes": {"list": [13]}, "colour": 1}"#);
    let out = sparsesum(&["sweep", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn composite_modulus_exits_two() {
    let out = sparsesum(&["sum", "--p", "15", "--poly", "1,1;1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_exits_three() {
    let out = sparsesum(&["sweep", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_three() {
    let out = sparsesum(&[
        "sum",
        "--p",
        "13",
        "--poly",
        "1,1;1,2",
        "--out",
        "/nonexistent/dir/x.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_then_plotdata() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"primes": {"list": [13, 31, 61]}, "suites": ["ratio", "bounds"], "polynomials": [{"random": {"count": 4}}]}"#,
    );
    let data = dir.path().join("data.jsonl");
    let out = sparsesum(&[
        "sweep",
        "--config",
        &config,
        "--seed",
        "7",
        "--out",
        data.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    for (kind, columns) in [
        ("ratio-vs-cardinality", 5),
        ("bound-vs-p", 8),
        ("winner-map", 3),
    ] {
        let table = dir.path().join(format!("{kind}.dat"));
        let out = sparsesum(&[
            "plotdata",
            "--kind",
            kind,
            "--input",
            data.to_str().unwrap(),
            "--out",
            table.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let text = std::fs::read_to_string(&table).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with('#'));
        let rows: Vec<&str> = lines.collect();
        assert!(!rows.is_empty(), "{kind}");
        assert!(
            rows.iter().all(|r| r.split_whitespace().count() == columns),
            "{kind}"
        );
    }

    let out = sparsesum(&[
        "plotdata",
        "--kind",
        "pie",
        "--input",
        data.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plotdata_on_empty_dataset_prints_header() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("empty.jsonl");
    std::fs::write(&data, "").unwrap();
    let out = sparsesum(&[
        "plotdata",
        "--kind",
        "winner-map",
        "--input",
        data.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "# p klmn winner\n");
}

#[test]
fn bilinear_rerun_line_reproduces() {
    let out = sparsesum(&["sum", "--p", "101", "--bilinear-seed", "12345"]);
    assert_eq!(out.status.code(), Some(0));
    let again = sparsesum(&["sum", "--p", "101", "--bilinear-seed", "12345"]);
    let strip = |o: &Output| stdout(o).lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&out), strip(&again));
    assert!(stdout(&out).contains("\"bilinear\""));
}
