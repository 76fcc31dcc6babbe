use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_fqpoints");
const L_POLY: &str = "t1 + t2 + t3 - t1^2*t2^-2*t3 - t1^2*t2^-3*t3^2 - t1*t2^-2*t3^2";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("twisted_cubic.var");
    fs::write(&path, fqpoints::catalog::TWISTED_CUBIC).unwrap();
    let out = run(&[
        "count",
        "--field",
        "q=5",
        "--variety",
        path.to_str().unwrap(),
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["total"], 6);
    assert_eq!(json["oracle_total"], 6);
    assert_eq!(json["n0"], 2);
    assert!(json.get("strata").is_none());
}

#[test]
fn count_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("segre.json");
    let args = [
        "count",
        "--field",
        "q=4",
        "--variety",
        "builtin:segre-1x2",
        "--explain",
        "--json",
        report.to_str().unwrap(),
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read(&report).unwrap(), a.stdout);
    let json: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["total"], 5 * 21);
    let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
    assert_eq!(keys[..3], ["field", "theta_shift", "inputs"]);
    assert!(json["strata"].is_object());
    assert!(json["kernels"]["1,2,3"]["kernel"]["orders"].is_array());
}

#[test]
fn expsum_of_l() {
    let out = run(&["expsum", "--field", "q=3", "--poly", L_POLY]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "8");

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("l.csv");
    let out = run(&[
        "expsum",
        "--poly",
        L_POLY,
        "--sweep",
        "2..9",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let table = fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows[0], "q,re,im,rounded");
    let qs: Vec<&str> = rows[1..]
        .iter()
        .map(|r| r.split(',').next().unwrap())
        .collect();
    assert_eq!(qs, ["2", "3", "4", "5", "7", "8", "9"]);
    assert!(rows[7].ends_with(",134"));
}

#[test]
fn gauss_table() {
    let out = run(&["gauss", "q=3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,re,im,abs2");
    assert!(lines[1].starts_with("0,-1.0"));
    assert!(lines[2].contains(",1.732050807569,3.000000000000"));
}

#[test]
fn oracle_subcommand() {
    let out = run(&[
        "oracle",
        "count",
        "--field",
        "q=3^2;mod=1,0,1",
        "--variety",
        "builtin:twisted-cubic",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["total"], 10);
    assert_eq!(json["field"], "q=3^2;mod=1,0,1");
}

#[test]
fn verify_sweeps_pass() {
    let out = run(&["verify", "paper", "--qmax", "16"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().all(|l| !l.starts_with("FAIL")));
    assert!(text.contains("q=16"));
    let out = run(&["verify", "L", "--qmax", "9"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("L/shift=2"));
}

#[test]
fn input_errors_exit_2() {
    for args in [
        &[
            "count",
            "--field",
            "q=6",
            "--variety",
            "builtin:twisted-cubic",
        ][..],
        &["count", "--field", "q=5", "--variety", "builtin:foo"],
        &[
            "count",
            "--field",
            "q=5",
            "--variety",
            "/nonexistent/file.var",
        ],
        &["expsum", "--field", "q=5", "--poly", "t1 +* t2"],
        &[
            "expsum", "--field", "q=5", "--sweep", "2..5", "--poly", "t1",
        ],
        &["gauss", "q=5", "--theta-shift", "5"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["expsum", "--field", "q=5", "--poly", "t1 +* t2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
}

#[test]
fn inhomogeneous_variety_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.var");
    fs::write(&path, "nvars=3\nx1^2 + x2\n").unwrap();
    let out = run(&[
        "count",
        "--field",
        "q=5",
        "--variety",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not homogeneous"));
}
