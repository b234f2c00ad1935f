use std::path::Path;
use std::process::{Command, Output};

use inflex_core::search::ScanReport;
use inflex_core::{scroll, ClassRecord, GradedClass, ScrollSetup};

fn inflex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inflex")).args(args).env("RUST_LOG", "error").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ok(args: &[&str]) -> String {
    let o = inflex(args);
    assert!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn rank_examples() {
    assert!(ok(&["rank", "--n", "3", "--m", "2", "--k", "2"]).starts_with("r_2 = 9\n"));
    assert!(ok(&["rank", "--n", "4", "--m", "3", "--k", "2"]).starts_with("r_2 = 14\n"));
    assert!(ok(&["rank", "--n", "3", "--m", "1", "--k", "2"]).starts_with("r_2 = 7\n"));
    assert_eq!(inflex(&["rank", "--n", "3", "--m", "3", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn class_examples() {
    assert!(ok(&["class", "--n", "3", "--m", "2", "--k", "2", "--N", "8"]).contains("class   3*L - 5*C1 + 3*V1\n"));
    assert!(ok(&["class", "--n", "4", "--m", "3", "--k", "2", "--N", "15"]).contains("class   56*L^3 - 154*L^2*C1 + 84*L^2*V1"));
    let o = Command::new(env!("CARGO_BIN_EXE_inflex"))
        .args(["class", "--n", "3", "--m", "2", "--k", "2", "--N", "11"])
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside the range"));
}

#[test]
fn class_json_roundtrips() {
    let out = ok(&["--format", "json", "class", "--n", "3", "--m", "2", "--k", "2", "--N", "9"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rec: ClassRecord = serde_json::from_value(v["class"].clone()).unwrap();
    let engine = scroll::inflection_class(&ScrollSetup::new(3, 2, 2, 9).unwrap()).unwrap().class;
    assert_eq!(GradedClass::from_record(&rec).unwrap(), engine);
}

#[test]
fn degree_examples() {
    let symbolic = ok(&["degree", "--n", "3", "--m", "2", "--k", "2", "--N", "10", "--base", "abelian2"]);
    assert!(symbolic.contains("degree   46*w - 19*y\n"), "{symbolic}");
    let ex4 = ok(&["degree", "--n", "3", "--m", "2", "--k", "2", "--N", "10", "--base", "abelian2", "--set", "w=44", "--set", "y=11"]);
    assert!(ex4.ends_with("degree   1815\n"), "{ex4}");
    let proj = ok(&["degree", "--n", "3", "--m", "2", "--k", "2", "--N", "10", "--base", "P2", "--set", "x=4", "--set", "y=4"]);
    assert!(proj.ends_with("degree   6\n"), "{proj}");
}

#[test]
fn degree_from_data_dir() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "dim = 2\nrank = 2\nparams = []\n\n[values]\n\"c1^2\" = 9\n\"c2\" = 3\n\"c1*v1\" = 12\n\"v1^2\" = 16\n\"v2\" = 4\n";
    std::fs::write(dir.path().join("plane22.toml"), toml).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_inflex"))
        .args(["degree", "--n", "3", "--m", "2", "--k", "2", "--N", "10", "--data", "plane22.toml"])
        .env("INFLEX_DATA_DIR", dir.path())
        .current_dir(Path::new("/"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).ends_with("degree   6\n"));

    std::fs::write(dir.path().join("partial.toml"), "dim = 2\nrank = 2\nparams = []\n\n[values]\n\"c1^2\" = 9\n").unwrap();
    let bad = inflex(&["degree", "--n", "3", "--m", "2", "--k", "2", "--N", "10", "--data", dir.path().join("partial.toml").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("missing"));
}

#[test]
fn conflicting_base_flags() {
    let o = inflex(&["degree", "--n", "3", "--m", "2", "--k", "2", "--N", "9", "--base", "P2", "--data", "x.toml"]);
    assert!(!o.status.success());
}

#[test]
fn scan_examples() {
    assert!(ok(&["scan", "--family", "P2_N10"]).contains("verdict    empty\n"));
    assert!(ok(&["scan", "--family", "P2_N9"]).contains("verdict    excluded {(v=4, d=10, c2=6)}\n"));
    let json = ok(&["--format", "json", "scan", "--family", "P3", "--ell", "2"]);
    let report: ScanReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.summary(), "excluded {(x=4, y=5, d=24)}");
    let again: ScanReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn jet_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("variables = [\"u1\", \"u2\", \"v\"]\nbase_variables = 2\ncoordinates = [\"1\", \"u1\", \"u2\", \"v\", \"u1*v\", \"u2*v\"]\nk = 2\n", "generic rank 6"),
        ("variables = [\"u1\", \"u2\", \"v\"]\nbase_variables = 2\ncoordinates = [\"1\", \"u1\", \"u2\", \"v\", \"u1*u2\", \"u1*v\", \"u2*v\", \"u1*u2*v\"]\nk = 2\nseed = 3\n", "generic rank 7"),
        (
            "variables = [\"u1\", \"u2\", \"v\"]\nbase_variables = 2\ncoordinates = [\"-u1*v - u2\", \"v\", \"1\", \"-u1^2*v - u1*u2\", \"u1*v\", \"u1\", \"-u1*u2*v - u2^2\", \"u2*v\"]\nk = 2\ntrials = 4\n",
            "generic rank 8",
        ),
    ];
    for (i, (spec, want)) in cases.iter().enumerate() {
        let p = dir.path().join(format!("chart{i}.toml"));
        std::fs::write(&p, spec).unwrap();
        let out = ok(&["jet", p.to_str().unwrap()]);
        assert!(out.starts_with(want), "{out}");
    }
    let p = dir.path().join("ex5.toml");
    std::fs::write(&p, "variables = [\"u\", \"v\"]\nbase_variables = 1\ncoordinates = [\"1\", \"u\", \"v\", \"v*u\", \"v*u^2\"]\nk = 2\n").unwrap();
    assert!(ok(&["jet", p.to_str().unwrap(), "--minors", "5"]).contains("minor content v"));
}

#[test]
fn verify_filter_and_tamper() {
    let out = ok(&["verify", "--filter", "abelian"]);
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("ok") || l.starts_with("FAIL")).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|l| l.contains("abelian")));
    let o = inflex(&["verify", "--filter", "example4", "--tamper", "abelian.example4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL abelian.example4 "));
}

#[test]
fn verify_all_passes() {
    let out = ok(&["verify"]);
    assert!(out.trim_end().ends_with(", 0 failed"));
}
