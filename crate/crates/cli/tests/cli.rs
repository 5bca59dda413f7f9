use std::io::Write;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("specshift").chain(args.iter().copied());
    let code = specshift_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, err) = run(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn spectrum_json_lists_every_block() {
    let v = json(&["spectrum", "--weights", "geom:2", "--kind", "sym", "--kmax", "20"]);
    let blocks = v["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 21);
    for (k, b) in blocks.iter().enumerate() {
        assert_eq!(b["k"], k);
        assert_eq!(b["dim"], k / 2 + 1);
        assert_eq!(b["eigenvalues"].as_array().unwrap().len(), k / 2 + 1);
    }
    assert_eq!(blocks[1]["eigenvalues"][0].as_f64(), Some(0.5));
    assert_eq!(v["meta"]["zero_count"], 6);
}

#[test]
fn closed_form_csv_rows() {
    let (code, out, _) = run(&["closed-form", "--a", "2", "--kind", "asym", "--kmax", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,j,value");
    // blocks k = 1, 2, 3 have sizes 1, 1, 2
    assert_eq!(lines.len(), 1 + 4);
    let ks: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ks, ["1", "2", "3", "3"]);
    assert!(lines[1..].iter().all(|l| l.split(',').nth(2).unwrap().parse::<f64>().is_ok()));
}

#[test]
fn oracle_check_reports_union_rows() {
    let v = json(&["oracle-check", "--weights", "dirichlet", "--kmax", "10"]);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["matched"] == true));
    assert_eq!(checks.iter().filter(|c| c["kind"] == "union").count(), 11);
}

#[test]
fn disk_check_accepts_all_samples() {
    let v = json(&[
        "shift-diag", "disk-check", "--alpha", "bergman", "--mu", "const:1", "--samples", "25",
        "--tol", "1e-8",
    ]);
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 25);
    assert_eq!(v["meta"]["accepted"], 25);
    let r = v["meta"]["radius"].as_f64().unwrap();
    assert!((r - 2f64.sqrt() / 4.0).abs() < 1e-15);
}

#[test]
fn classify_finds_planted_zero_from_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "[1, 1, 0, 1]").unwrap();
    let mu = format!("file:{}", f.path().display());
    let v = json(&["shift-diag", "classify", "--alpha", "const:1", "--mu", &mu, "--zero-extend", "--n", "3"]);
    assert_eq!(v["classification"], "contains-zero");
    assert_eq!(v["witness"], 2);
    let v = json(&["shift-diag", "classify", "--alpha", "dirichlet", "--mu", "const:1", "--n", "40"]);
    assert_eq!(v["classification"], "empty-within-truncation");
}

#[test]
fn norm_bounds_witness() {
    let (code, out, _) = run(&["shift-diag", "norm-bounds", "--alpha", "kron:0", "--mu", "kron:1", "--n", "5"]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    let lower: f64 = row[0].parse().unwrap();
    let estimate: f64 = row[4].parse().unwrap();
    assert!((lower - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((estimate - lower).abs() < 1e-10);
}

#[test]
fn example_43_outside_half_disk() {
    let v = json(&["shift-diag", "example-43", "--lambda", "0.9", "--lambda", "0,0.8"]);
    let vs = v["eigenvectors"].as_array().unwrap();
    assert_eq!(vs.len(), 2);
    assert!(vs.iter().all(|e| e["accepted"] == true && e["outside_half_disk"] == true));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["spectrum", "--weights", "nonsense"]).0, 1);
    assert_eq!(run(&["closed-form", "--a", "0.5", "--kind", "sym", "--kmax", "3"]).0, 1);
    assert_eq!(run(&["example-43"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
    assert_eq!(run(&["shift-diag", "disk-check", "--alpha", "const:1", "--mu", "const:1", "--safety", "1.2"]).0, 1);
    // J capped at 2 cannot reach the tolerance; output is still written
    let (code, out, _) = run(&[
        "shift-diag", "disk-check", "--alpha", "const:1", "--mu", "const:1", "--samples", "5",
        "--max-order", "2",
    ]);
    assert_eq!(code, 2);
    assert!(out.starts_with("index,"));
}

#[test]
fn binary_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let status = Command::new(env!("CARGO_BIN_EXE_specshift"))
        .args(["spectrum", "--weights", "const:1", "--kmax", "5", "--format", "json", "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["blocks"].as_array().unwrap().len(), 6);
}
