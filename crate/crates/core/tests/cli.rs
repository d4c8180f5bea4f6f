use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use superprolong::sc::ScTable;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superprolong")).args(args).output().unwrap()
}

#[test]
fn run_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = cli(&["run", "--p", "5", "--output", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["format"], "superprolong-report-v1");
    assert_eq!(v["report"]["total"], "17|14");

    let out = cli(&["table", a.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("17|14"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["run", "--p", "5", "--mode", "partial-prime"][..],
        &["run", "--N", "3"],
        &["run", "--matrix", "2"],
        &["run", "--grading", "0,1,0"],
        &["run", "--bogus"],
        &["verify", "--suite", "paper-tables", "--N", "3"],
    ] {
        assert_eq!(cli(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("bj.sc");
    let second = dir.path().join("bj2.sc");
    let out = cli(&["export", "--mode", "partial-double-prime", "--output", first.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&first).unwrap();
    let table = ScTable::parse(&text).unwrap();
    assert_eq!(table.basis.len(), 24);
    table.verify().unwrap();

    let out = cli(&[
        "export",
        "--input",
        first.to_str().unwrap(),
        "--output",
        second.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(&second).unwrap(), text);

    let broken = dir.path().join("broken.sc");
    let mut lines: Vec<&str> = text.lines().collect();
    let at = lines.iter().position(|l| l.starts_with("c ")).unwrap();
    let tampered = {
        let mut f: Vec<String> = lines[at].split(' ').map(str::to_string).collect();
        let v: u32 = f[4].parse().unwrap();
        f[4] = (3 - v).to_string();
        f.join(" ")
    };
    lines[at] = &tampered;
    fs::write(&broken, lines.join("\n")).unwrap();
    let out = cli(&["export", "--input", broken.to_str().unwrap(), "--output", second.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_properties() {
    let out = cli(&["verify", "--suite", "properties", "--samples", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
}
