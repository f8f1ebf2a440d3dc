use std::path::Path;
use std::process::{Command, Output};

use laplace_phase::cli::{run, CSV_HEADER, EXIT_ASSERTION, EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK};

const BIN: &str = env!("CARGO_BIN_EXE_laplace-phase");

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("laplace-phase").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn single_error_line(err: &str) {
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "{err:?}");
    assert!(lines[0].starts_with("error: "), "{err:?}");
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#') && l.split(',').count() == 9)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn fit_footer(text: &str) -> (f64, f64) {
    let line = text.lines().find(|l| l.starts_with("#fit,")).unwrap();
    let parts: Vec<f64> = line[5..].split(',').map(|v| v.parse().unwrap()).collect();
    (parts[0], parts[1])
}

#[test]
fn eval_i_infinite() {
    let (code, out, _) = call(&["eval", "--family", "I", "--c", "1", "--T", "inf", "--s", "1000", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next().unwrap(), CSV_HEADER);
    let row = &csv_rows(&out)[0];
    assert_eq!(row[0], "I");
    assert_eq!(row[2], "inf");
    let rel_err: f64 = row[8].parse().unwrap();
    assert!((rel_err - 0.002).abs() < 1e-4, "{rel_err}");
}

#[test]
fn eval_j_at_huge_s_stays_finite() {
    let (code, out, _) = call(&["eval", "--family", "J", "--c", "1", "--T", "1", "--s", "1e6", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let row = &csv_rows(&out)[0];
    let log_mag: f64 = row[4].parse().unwrap();
    // 1e6 - ln(1e6 sqrt(5))
    assert!((log_mag - (1e6 - (1e6 * 5f64.sqrt()).ln())).abs() < 1e-6, "{log_mag}");
    assert!(row[4..].iter().all(|v| v.parse::<f64>().unwrap().is_finite()));
}

#[test]
fn eval_table_format() {
    let (code, out, _) = call(&["eval", "--family", "J1", "--c", "2", "--T", "0.5", "--s", "50"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 2);
    assert!(out.starts_with("fam"));
}

#[test]
fn eval_rejects_negative_c() {
    let (code, _, err) = call(&["eval", "--family", "I", "--c", "-1", "--T", "inf", "--s", "10"]);
    assert_eq!(code, EXIT_INVALID);
    single_error_line(&err);
    assert!(err.contains("c must be > 0"), "{err}");
}

#[test]
fn eval_input_errors() {
    for args in [
        vec!["eval", "--family", "X", "--c", "1", "--T", "1", "--s", "1"],
        vec!["eval", "--family", "I", "--c", "1", "--T", "soon", "--s", "1"],
        vec!["eval", "--family", "J1", "--c", "1", "--T", "inf", "--s", "1"],
        vec!["eval", "--family", "I", "--c", "1", "--T", "1", "--s", "0"],
        vec!["eval", "--family", "I", "--c", "1", "--T", "1", "--s", "1", "--rel-tol", "1"],
        vec!["eval", "--family", "I", "--c", "1", "--T", "1"],
        vec!["frobnicate"],
        vec![],
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, EXIT_INVALID, "{args:?}");
        single_error_line(&err);
    }
}

#[test]
fn eval_numerical_failure_exits_3() {
    // the tolerance is legal but below what the oracle can resolve here
    let (code, _, err) = call(&["eval", "--family", "I1", "--c", "1", "--T", "1", "--s", "1e4", "--rel-tol", "2e-14"]);
    assert_eq!(code, EXIT_NUMERICAL, "{err}");
    single_error_line(&err);
}

#[test]
fn sweep_j1_order_in_footer() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("j1.csv");
    let (code, out, _) = call(&[
        "sweep", "--family", "J1", "--c", "1", "--T", "1", "--s-min", "32", "--s-max", "16384",
        "--points", "10", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("fitted order"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(csv_rows(&text).len(), 10);
    let (order, r2) = fit_footer(&text);
    assert!((0.85..=1.15).contains(&order), "{order}");
    assert!(r2 >= 0.98);
}

#[test]
fn sweep_i_decreases_after_regime_entry() {
    let (code, out, _) = call(&[
        "sweep", "--family", "I", "--c", "1", "--T", "inf", "--s-min", "32", "--s-max", "16384",
        "--points", "10", "--format", "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    let errs: Vec<f64> = csv_rows(&out).iter().map(|r| r[8].parse().unwrap()).collect();
    assert_eq!(errs.len(), 10);
    let entry = out
        .lines()
        .find(|l| l.starts_with("fitted order"))
        .and_then(|l| l.rsplit("s = ").next())
        .and_then(|v| v.trim_end_matches(')').parse::<f64>().ok())
        .unwrap();
    let rows = csv_rows(&out);
    let k = rows.iter().position(|r| r[3].parse::<f64>().unwrap() == entry).unwrap();
    assert!(errs[k..].windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn sweep_rejects_three_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let (code, _, err) = call(&[
        "sweep", "--family", "J1", "--c", "1", "--T", "1", "--s-min", "32", "--s-max", "64",
        "--points", "3", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_INVALID);
    single_error_line(&err);
    assert!(!path.exists());
}

#[test]
fn sweep_failure_leaves_no_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fail.csv");
    let (code, _, err) = call(&[
        "sweep", "--family", "I1", "--c", "1", "--T", "1", "--s-min", "1e3", "--s-max", "1e5",
        "--points", "5", "--rel-tol", "2e-14", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_NUMERICAL, "{err}");
    single_error_line(&err);
    assert!(err.contains("at s = "), "{err}");
    assert!(!path.exists());

    let missing = dir.path().join("no/such/dir/out.csv");
    let (code, _, err) = call(&[
        "sweep", "--family", "J1", "--c", "1", "--T", "1", "--s-min", "32", "--s-max", "1024",
        "--points", "5", "--out", missing.to_str().unwrap(),
    ]);
    assert_ne!(code, EXIT_OK);
    single_error_line(&err);
    assert!(!Path::new(&missing).exists());
}

#[test]
fn sweep_csv_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let run = binary(&[
            "sweep", "--family", "I", "--c", "0.5", "--T", "1", "--s-min", "10", "--s-max", "1e4",
            "--points", "8", "--out", path.to_str().unwrap(),
        ]);
        assert!(run.status.success());
        files.push(std::fs::read(path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn check_bogus_lists_suites() {
    let (code, _, err) = call(&["check", "bogus"]);
    assert_eq!(code, EXIT_INVALID);
    single_error_line(&err);
    for suite in ["theorem1", "theorem2", "lemma1", "remark1", "eq9", "all"] {
        assert!(err.contains(suite), "{err}");
    }
}

#[test]
fn check_passing_suites() {
    for suite in ["theorem1", "theorem2", "lemma1", "remark1"] {
        let run = binary(&["check", suite]);
        let out = String::from_utf8_lossy(&run.stdout);
        assert_eq!(run.status.code(), Some(EXIT_OK), "{suite}: {out}");
        assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 3);
        assert!(!out.contains("FAIL"));
    }
}

#[test]
fn check_theorem2_covers_identity_and_sweeps() {
    let (code, out, _) = call(&["check", "theorem2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("direct J vs"));
    assert!(out.contains("J rows reproduce J1 rows"));
}

#[test]
fn check_eq9_reports_the_finite_difference_gap() {
    let (code, out, err) = call(&["check", "eq9"]);
    assert_eq!(code, EXIT_ASSERTION);
    single_error_line(&err);
    let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 1, "{out}");
    assert!(fails[0].contains("s = 1e4"));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("eval") && out.contains("sweep") && out.contains("check"));
}
