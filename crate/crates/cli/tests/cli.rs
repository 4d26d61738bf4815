use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn liesys(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liesys")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn field(report: &str, key: &str) -> String {
    let prefix = format!("{key}: ");
    report
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{key}` in report:\n{report}"))
        .to_string()
}

fn last_row(csv: &str) -> Vec<f64> {
    let line = csv.lines().last().unwrap();
    line.split(',').map(|v| v.parse().unwrap()).collect()
}

#[test]
fn riccati_solve_reaches_tan_one() {
    let dir = TempDir::new().unwrap();
    let o = liesys(dir.path(), &["solve", "riccati", "--b0", "1", "--b1", "0", "--b2", "1", "--x0", "0", "--t0", "0", "--t1", "1", "--out", "r.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(csv.starts_with("t,x\n"));
    let row = last_row(&csv);
    assert_eq!(row[0], 1.0);
    assert!((row[1] - 1.0f64.tan()).abs() < 1e-8, "{}", row[1]);
    assert!((field(&stdout(&o), "x_final").parse::<f64>().unwrap() - 1.5574).abs() < 1e-4);
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let args = ["solve", "riccati", "--b0", "1+t", "--b1", "sin(t)", "--b2", "1", "--x0", "0.3", "--t1", "2", "--out"];
    let mut runs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let mut a = args.to_vec();
        a.push(name);
        assert!(liesys(dir.path(), &a).status.success());
        runs.push(fs::read(dir.path().join(name)).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn start_at_infinity_streams_csv_to_stdout() {
    let dir = TempDir::new().unwrap();
    let o = liesys(dir.path(), &["solve", "--system", "riccati", "--b0", "1", "--b1", "0", "--b2", "1", "--x0", "inf", "--t1", "2", "--samples", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    // no --out: CSV on stdout, report on stderr
    let csv = stdout(&o);
    assert!(csv.starts_with("t,x\n0.0,inf\n"), "{csv}");
    assert_eq!(field(&stderr(&o), "chart_switches"), "1");
    let row = last_row(&csv);
    // x(t) = -cot(t)
    assert!((row[1] + 1.0 / 2.0f64.tan()).abs() < 1e-8);
}

#[test]
fn integrability_example_holds_with_k_three() {
    let dir = TempDir::new().unwrap();
    let o = liesys(
        dir.path(),
        &["check-integrability", "--b0", "2*(1+t^2)", "--b1", "3*(1+t^2)", "--b2", "(1+t^2)/2", "--c0", "1", "--c2", "1", "--t0", "0", "--t1", "2"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let r = stdout(&o);
    assert_eq!(field(&r, "holds"), "true");
    assert!((field(&r, "k").parse::<f64>().unwrap() - 3.0).abs() < 1e-8);
}

#[test]
fn integrability_failure_is_a_report_not_an_error() {
    let dir = TempDir::new().unwrap();
    let o = liesys(dir.path(), &["check-integrability", "--b0", "1", "--b1", "t", "--b2", "1", "--c0", "1", "--c2", "1", "--t1", "1"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "holds"), "false");
}

#[test]
fn verify_algebra_residuals_are_small() {
    let dir = TempDir::new().unwrap();
    for system in ["riccati", "oscillator", "pinney", "ermakov", "group"] {
        let o = liesys(dir.path(), &["verify-algebra", "--system", system, "--points", "20"]);
        assert!(o.status.success(), "{system}: {}", stderr(&o));
        let r = stdout(&o);
        assert!(field(&r, "max_residual").parse::<f64>().unwrap() <= 1e-6, "{system}: {r}");
        assert_eq!(field(&r, "ok"), "true");
    }
}

#[test]
fn superpose_reads_three_solutions_and_recovers_k_from_four() {
    let dir = TempDir::new().unwrap();
    let files = ["x1.csv", "x2.csv", "x3.csv", "x4.csv"];
    for (x0, name) in ["-0.5", "0", "0.5", "0.25"].iter().zip(files) {
        let o = liesys(dir.path(), &["solve", "riccati", "--b0", "1", "--b1", "0", "--b2", "1", "--x0", x0, "--t1", "1", "--samples", "11", "--out", name]);
        assert!(o.status.success());
    }
    let o = liesys(dir.path(), &["superpose", "riccati", "--inputs", "x1.csv,x2.csv,x3.csv,x4.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stderr(&o);
    let k: f64 = field(&report, "k").parse().unwrap();
    assert!((k - 2.0 / 3.0).abs() < 1e-9, "{report}");
    assert!(field(&report, "k_max_relative_drift").parse::<f64>().unwrap() < 1e-6);

    // feeding k back reproduces the fourth solution
    let o = liesys(dir.path(), &["superpose", "riccati", "--inputs", "x1.csv,x2.csv,x3.csv", "--k", &k.to_string(), "--out", "y.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let y = fs::read_to_string(dir.path().join("y.csv")).unwrap();
    let x4 = fs::read_to_string(dir.path().join("x4.csv")).unwrap();
    for (a, b) in y.lines().skip(1).zip(x4.lines().skip(1)) {
        let (a, b) = (last_row(a)[1], last_row(b)[1]);
        assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()), "{a} vs {b}");
    }
}

#[test]
fn pinney_superposition_from_oscillator_files() {
    let dir = TempDir::new().unwrap();
    for (x0, v0, name) in [("1", "0", "x.csv"), ("0", "1", "z.csv")] {
        let o = liesys(dir.path(), &["solve", "oscillator", "--omega", "1", "--x0", x0, "--v0", v0, "--t1", "3", "--samples", "301", "--out", name]);
        assert!(o.status.success());
    }
    let o = liesys(dir.path(), &["superpose", "pinney", "--inputs", "x.csv,z.csv", "--c", "1", "--y0", "2", "--vy0", "0", "--out", "y.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let y = fs::read_to_string(dir.path().join("y.csv")).unwrap();
    for line in y.lines().skip(1) {
        let row = last_row(line);
        let (c, s) = (row[0].cos(), row[0].sin());
        let want = (4.0 * c * c + 0.25 * s * s).sqrt();
        assert!((row[1] - want).abs() < 1e-6, "t = {}: {} vs {want}", row[0], row[1]);
    }
}

#[test]
fn invariant_drift_is_reported() {
    let dir = TempDir::new().unwrap();
    let o = liesys(
        dir.path(),
        &["invariant", "oscillator", "--omega", "1+0.3*sin(t)", "--x0", "1", "--v0", "0", "--z0", "0", "--vz0", "1", "--t1", "10", "--out", "w.csv"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let r = stdout(&o);
    assert_eq!(field(&r, "w"), "1.0");
    assert!(field(&r, "max_drift").parse::<f64>().unwrap() < 1e-8);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("run.conf"), "# tan\nsystem = riccati\nb0 = 1\nb1 = 0\nb2 = 1\nx0 = 0\nt1 = 2\n").unwrap();
    let o = liesys(dir.path(), &["solve", "--config", "run.conf", "--t1", "1", "--out", "r.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "t_end"), "1.0");

    fs::write(dir.path().join("empty.conf"), "").unwrap();
    let o = liesys(dir.path(), &["solve", "riccati", "--config", "empty.conf", "--b0", "1", "--b1", "0", "--b2", "1", "--x0", "0", "--t1", "1", "--out", "e.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn unknown_config_key_names_line_one() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.conf"), "bogus = 1\n").unwrap();
    let o = liesys(dir.path(), &["solve", "riccati", "--config", "bad.conf"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("line 1") && err.contains("bogus"), "{err}");
}

#[test]
fn exit_codes_separate_usage_from_numerical_failures() {
    let dir = TempDir::new().unwrap();
    let missing = liesys(dir.path(), &["solve", "riccati", "--b0", "1", "--b2", "1", "--x0", "0", "--t1", "1"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(stderr(&missing).contains("--b1"));

    let syntax = liesys(dir.path(), &["solve", "riccati", "--b0", "1+", "--b1", "0", "--b2", "1", "--x0", "0", "--t1", "1"]);
    assert_eq!(syntax.status.code(), Some(1));
    assert!(stderr(&syntax).contains("syntax error"));

    let budget = liesys(dir.path(), &["solve", "riccati", "--b0", "1", "--b1", "0", "--b2", "1", "--x0", "0", "--t1", "3", "--max-steps", "5"]);
    assert_eq!(budget.status.code(), Some(2));
    assert!(stderr(&budget).contains("max steps exceeded"));

    let det = liesys(dir.path(), &["transform", "group", "--b0", "1", "--b1", "0", "--b2", "1", "--alpha", "2", "--beta", "0", "--gamma", "0", "--delta", "1", "--t1", "1"]);
    assert_eq!(det.status.code(), Some(2));
    assert!(stderr(&det).contains("invalid curve"));

    assert_eq!(liesys(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(liesys(dir.path(), &["--help"]).status.code(), Some(0));
}
