use std::process::{Command, Output};

use binsum::report::{BenchReport, CompareReport};

fn binsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binsum")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = binsum(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    binsum(args).status.code().unwrap()
}

#[test]
fn pdf_of_two_fair_trials() {
    assert_eq!(
        stdout(&["pdf", "--sizes", "2", "--probs", "0.5"]),
        "s,value\n0,0.25\n1,0.5\n2,0.25\n"
    );
}

#[test]
fn pdf_points_and_log() {
    let out = stdout(&["pdf", "--sizes", "2", "--probs", "0.5", "--x", "1,5", "--log"]);
    assert_eq!(out, format!("s,value\n1,{}\n5,-inf\n", 0.5f64.ln()));
}

#[test]
fn cdf_tails() {
    let lower = stdout(&["cdf", "--sizes", "3,4", "--probs", "0.2,0.6", "--q", "0,7"]);
    let upper = stdout(&[
        "cdf",
        "--sizes",
        "3,4",
        "--probs",
        "0.2,0.6",
        "--q",
        "7",
        "--lower-tail",
        "false",
    ]);
    // 0.8^3 * 0.4^4
    assert_eq!(lower, "s,value\n0,0.0131072\n7,1\n");
    assert_eq!(upper, "s,value\n7,0\n");
}

#[test]
fn quantile_at_full_mass() {
    assert_eq!(
        stdout(&["quantile", "--sizes", "2", "--probs", "0.5", "--p", "1.0"]),
        "p,s\n1,2\n"
    );
    let out = stdout(&["quantile", "--sizes", "100,100", "--probs", "0.5", "--p", "0,0.5"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[1], "0,0");
    let median: i64 = rows[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((median - 100).abs() <= 1);
}

#[test]
fn sample_is_deterministic_and_seeded() {
    let args = ["sample", "--sizes", "20,30", "--probs", "0.2,0.7", "--count", "500"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert_eq!(a.lines().count(), 501);
    assert!(a.starts_with("draw\n"));
    let mut seeded = args.to_vec();
    seeded.extend(["--seed", "42"]);
    assert_eq!(a, stdout(&seeded));
    seeded[8] = "43";
    assert_ne!(a, stdout(&seeded));
}

#[test]
fn compare_two_binomial_cdf() {
    let out = stdout(&[
        "compare",
        "--mode",
        "two-binomial",
        "--m",
        "100",
        "--n",
        "100",
        "--p",
        "0.5",
        "--stat",
        "cdf",
    ]);
    let rows = CompareReport::read_rows(out.as_bytes()).unwrap();
    assert_eq!(rows.len(), 201);
    assert!(rows.iter().all(|r| r.diff == r.truth - r.approx));
    assert!(rows.iter().map(|r| r.diff.abs()).fold(0.0, f64::max) < 5e-4);
}

#[test]
fn compare_two_binomial_boundary_and_large_support() {
    let out = stdout(&[
        "compare",
        "--mode",
        "two-binomial",
        "--m",
        "10",
        "--n",
        "10",
        "--p",
        "0.5",
        "--stat",
        "cdf",
    ]);
    assert_eq!(CompareReport::read_rows(out.as_bytes()).unwrap()[0].diff, 0.0);

    let out = stdout(&[
        "compare",
        "--mode",
        "two-binomial",
        "--m",
        "10",
        "--n",
        "1000",
        "--p",
        "0.9",
        "--stat",
        "cdf",
    ]);
    let rows = CompareReport::read_rows(out.as_bytes()).unwrap();
    assert_eq!(rows.len(), 1011);
    assert!(rows.iter().all(|r| r.diff.is_finite()));
}

#[test]
fn compare_mixture_defaults_to_healthcare() {
    let out = binsum(&["compare"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sizes=12,14,4,2,20,17,11,1,8,11"));
    let rows = CompareReport::read_rows(out.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().map(|r| r.diff.abs()).fold(0.0, f64::max) <= 1e-4);
    let truth: f64 = rows.iter().map(|r| r.truth).sum();
    let approx: f64 = rows.iter().map(|r| r.approx).sum();
    assert!((truth - 1.0).abs() < 1e-6 && (approx - 1.0).abs() < 1e-6);
}

#[test]
fn compare_simulation_is_reproducible() {
    let args = ["compare", "--truth", "simulation", "--trials", "2000", "--seed", "9"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let rows = CompareReport::read_rows(a.as_bytes()).unwrap();
    let truth: f64 = rows.iter().map(|r| r.truth).sum();
    assert!((truth - 1.0).abs() < 1e-6);
}

#[test]
fn compare_all_boundary_support() {
    let out = stdout(&["compare", "--sizes", "1", "--probs", "0.5"]);
    assert_eq!(out, "s,truth,approx,diff\n0,0.5,0.5,0\n1,0.5,0.5,0\n");
}

#[test]
fn bench_rows() {
    let out = stdout(&["bench", "--sizes", "8,5", "--probs", "0.3,0.6", "--trials", "100,1000"]);
    let rows = BenchReport::read_rows(out.as_bytes()).unwrap();
    let methods: Vec<_> = rows.iter().map(|r| r.method.as_str()).collect();
    assert_eq!(methods, ["saddlepoint", "simulation_100", "simulation_1000"]);
    assert!(rows.iter().all(|r| r.wall_time_s > 0.0 && r.max_abs_error.is_finite()));
}

#[test]
fn writes_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pdf.csv");
    let out = binsum(&["pdf", "--sizes", "2", "--probs", "0.5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(path).unwrap(),
        "s,value\n0,0.25\n1,0.5\n2,0.25\n"
    );
}

#[test]
fn usage_and_validation_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["pdf", "--sizes", "2"],
        &["pdf", "--sizes", "2,x", "--probs", "0.5"],
        &["pdf", "--sizes", "-1", "--probs", "0.5"],
        &["pdf", "--sizes", "2", "--probs", "1.5"],
        &["pdf", "--sizes", "2,3,4", "--probs", "0.5,0.5"],
        &["quantile", "--sizes", "2", "--probs", "0.5", "--p", "1.2"],
        &["cdf", "--sizes", "2", "--probs", "0.5", "--lower-tail", "maybe"],
        &["compare", "--truth", "simulation"],
        &["compare", "--trials", "10"],
        &["compare", "--mode", "two-binomial", "--m", "10"],
        &["bench"],
    ] {
        let out = binsum(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = binsum(&["pdf", "--sizes", "2", "--probs", "1.5"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("probability at index 0"));
}

#[test]
fn guard_exceeded_exits_3() {
    assert_eq!(code(&["compare", "--sizes", "600000,600000", "--probs", "0.5"]), 3);
}
