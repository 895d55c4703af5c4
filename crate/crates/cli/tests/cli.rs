use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const WORKED: &str = include_str!("golden/worked.toml");

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_expvolterra"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

#[test]
fn certify_worked_problem_matches_golden_report() {
    let input = golden("worked.toml");
    let out = run(&["certify", input.to_str().unwrap(), "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let expected = std::fs::read_to_string(golden("certify_worked.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout.clone()).unwrap(), expected);
    let report = json(&out);
    let cert = &report["certificate"];
    assert_eq!(cert["pass"], true);
    assert_eq!(cert["R"], 1.0);
    assert_eq!(cert["p"], 0.49);
    assert!(cert["ledger"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}

#[test]
fn certify_growth_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "p.toml",
        &WORKED.replace("re = -0.5", "re = -0.76"),
    );
    let out = run(&["certify", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let report = json(&out);
    assert_eq!(report["certificate"]["first_failure"], "GrowthCondition");
    assert_eq!(report["outcome"]["exit_code"], 2);
}

#[test]
fn missing_field_exits_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.toml", &WORKED.replace("a1 = 1.0\n", ""));
    for cmd in ["certify", "solve", "verify"] {
        let out = run(&[cmd, input.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1));
        let stderr = String::from_utf8(out.stderr).unwrap();
        assert!(stderr.contains("forcing.a1"), "{stderr}");
        assert!(stderr.contains("number"), "{stderr}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn bad_invocations_exit_one() {
    assert_eq!(
        run(&["certify", "/nonexistent/p.toml"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let input = golden("worked.toml");
    let path = input.to_str().unwrap();
    assert_eq!(
        run(&["verify", path, "--slack", "-1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["certify", path, "--margin", "1.5"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["solve", path, "--grid-n", "0"]).status.code(),
        Some(1)
    );
}

#[test]
fn solve_both_writes_csv_and_distance() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("u.csv");
    let input = golden("worked.toml");
    let out = run(&[
        "solve",
        input.to_str().unwrap(),
        "--method",
        "both",
        "--out-csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report["solvers"]["sup_distance"].as_f64().unwrap() <= 1e-4);
    assert!(report["timing"]["total_ms"].as_f64().is_some());

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "t",
            "re_u_picard",
            "im_u_picard",
            "abs_u_picard",
            "re_u_ode",
            "im_u_ode",
            "abs_u_ode",
            "envelope"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20_001);
    assert_eq!(&rows[0][0], "0");
    assert_eq!(rows[0][3].parse::<f64>().unwrap(), 0.1);
    assert_eq!(rows[20_000][0].parse::<f64>().unwrap(), 20.0);
    for row in &rows {
        let abs: f64 = row[6].parse().unwrap();
        let env: f64 = row[7].parse().unwrap();
        assert!(abs <= env);
    }
}

#[test]
fn solve_zero_nonlinearity_reproduces_forcing() {
    let dir = tempfile::tempdir().unwrap();
    let text = "a = 2.0\n[nonlinearity]\nfamily = \"zero\"\n[forcing]\nA = { re = 0.06, im = -0.08 }\na1 = 1.0\n[grid]\nT = 20.0\nn = 20000\n";
    let input = write(dir.path(), "zero.toml", text);
    for method in ["picard", "ode"] {
        let csv_path = dir.path().join(format!("{method}.csv"));
        let out = run(&[
            "solve",
            input.to_str().unwrap(),
            "--method",
            method,
            "--out-csv",
            csv_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut reader = csv::Reader::from_path(&csv_path).unwrap();
        // Zero family is never certified, so there is no envelope column.
        assert_eq!(reader.headers().unwrap().len(), 4);
        for (k, row) in reader.records().enumerate() {
            let row = row.unwrap();
            let t: f64 = row[0].parse().unwrap();
            let abs: f64 = row[3].parse().unwrap();
            assert!((abs - 0.1 * (-t).exp()).abs() <= 1e-10, "{method} row {k}");
            if k == 0 {
                assert_eq!(t, 0.0);
                assert_eq!(abs, 0.1);
            }
        }
    }
}

#[test]
fn solver_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let capped = write(
        dir.path(),
        "capped.toml",
        &WORKED.replace("max_iter = 200", "max_iter = 1"),
    );
    let out = run(&["solve", capped.to_str().unwrap(), "--method", "picard"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["outcome"]["status"], "solver-failure");

    let blowup = "a = 1.0\n[nonlinearity]\nfamily = \"integer-power\"\nlambda = { re = 1.0 }\nb = 2\n[forcing]\nA = { re = 5.0 }\na1 = 0.1\n";
    let blowup = write(dir.path(), "blowup.toml", blowup);
    for method in ["picard", "ode", "both"] {
        let out = run(&["solve", blowup.to_str().unwrap(), "--method", method]);
        assert_eq!(out.status.code(), Some(3), "{method}");
    }
}

#[test]
fn verify_worked_problem() {
    let input = golden("worked.toml");
    let out = run(&["verify", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    for method in ["picard", "ode"] {
        let bound = &report["bound"][method];
        assert_eq!(bound["holds"], true);
        assert!(bound["max_ratio"].as_f64().unwrap() <= 1.0 + 1e-6);
        assert_eq!(report["comparison"]["envelope"][method]["holds"], true);
    }
    assert_eq!(report["comparison"]["mu_condition"]["holds"], true);
    assert_eq!(report["comparison"]["initial_condition"], true);

    let strict = run(&[
        "verify",
        input.to_str().unwrap(),
        "--slack",
        "0",
        "--no-timing",
    ]);
    assert_eq!(strict.status.code(), Some(0));
    assert_eq!(json(&strict)["bound"]["ode"]["slack"], 0.0);
}

#[test]
fn verify_failing_certificate_skips_solvers() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "p.toml",
        &WORKED.replace("re = -0.5", "re = -0.76"),
    );
    let out = run(&["verify", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let report = json(&out);
    assert!(report.get("solvers").is_none());
    assert!(report.get("bound").is_none());
}

#[test]
fn reports_are_deterministic_without_timing() {
    let input = golden("worked.toml");
    let path = input.to_str().unwrap();
    for cmd in ["certify", "solve", "verify"] {
        let a = run(&[cmd, path, "--no-timing", "--grid-n", "2000"]);
        let b = run(&[cmd, path, "--no-timing", "--grid-n", "2000"]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        assert!(json(&a).get("timing").is_none());
    }
}

#[test]
fn overrides_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let input = golden("worked.toml");
    let out = run(&[
        "certify",
        input.to_str().unwrap(),
        "--margin",
        "0.5",
        "--grid-T",
        "5",
        "--grid-n",
        "100",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(report_path).unwrap()).unwrap();
    assert_eq!(report["certificate"]["p"], 0.25);
    assert_eq!(report["problem"]["T"], 5.0);
    assert_eq!(report["problem"]["n"], 100);
}
