//! End-to-end tests of the command-line interface.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gentle"))
}

fn run(args: &[&str], dir: &PathBuf) -> Output {
    bin().args(args).current_dir(dir).output().expect("spawn gentle")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn setup() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gentle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = run(&["fixtures", "-o", "."], &dir);
    assert!(out.status.success());
    dir
}

#[test]
fn fixtures_validate_and_round_trip() {
    let dir = setup();
    for name in ["lambda0.alg", "lambda1.alg", "lambda1_pinched.alg"] {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        assert!(!text.is_empty());
    }
    let out = run(&["validate", "lambda1.alg"], &dir);
    assert!(out.status.success());
    assert!(stdout(&out).contains("gentle=pass"));
    // The pinched fixture is not gentle on the nose: report-level exit 1.
    let out = run(&["validate", "lambda1_pinched.alg"], &dir);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("violation"));
    // But it decomposes.
    let out = run(&["decompose", "lambda1_pinched.alg"], &dir);
    assert!(out.status.success());
    assert!(stdout(&out).contains("loops=1"));
}

#[test]
fn pinch_reproduces_the_fixture_file() {
    let dir = setup();
    let out = run(&["pinch", "lambda1.alg", "--kronecker", "α,β"], &dir);
    assert!(out.status.success());
    let text = stdout(&out);
    let produced: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .collect();
    let fixture = std::fs::read_to_string(dir.join("lambda1_pinched.alg")).unwrap();
    let expected: Vec<&str> = fixture
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .collect();
    assert_eq!(produced, expected);
}

#[test]
fn runs_are_deterministic() {
    let dir = setup();
    let args = [
        "quotient",
        "lambda1.alg",
        "--source-vertex",
        "1",
        "--target-vertex",
        "1",
        "--kronecker",
        "α,β",
        "--filtration-max",
        "3",
        "--window",
        "-2:2",
    ];
    let a = run(&args, &dir);
    let b = run(&args, &dir);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("filtration_profile="));
}

#[test]
fn usage_errors_exit_two() {
    let dir = setup();
    let out = run(&["quotient", "lambda1.alg", "--source-vertex", "1"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn formality_passes_with_small_budget() {
    let dir = setup();
    let out = run(
        &[
            "formality",
            "lambda1.alg",
            "--kronecker",
            "α,β",
            "--filtration-max",
            "2",
            "--window",
            "-2:2",
            "--length-bound",
            "6",
        ],
        &dir,
    );
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("formality=pass=true pairs=36"));
}

#[test]
fn char_two_iso_check_is_refused() {
    let dir = setup();
    let out = run(
        &["iso-check", "lambda1.alg", "--kronecker", "α,β", "--char", "2"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("characteristic"), "{err}");
}

#[test]
fn surface_and_contract_reports() {
    let dir = setup();
    let out = run(&["surface", "lambda0.alg"], &dir);
    assert!(out.status.success());
    assert!(stdout(&out).contains("genus 0"));
    assert!(stdout(&out).contains("○=3, ●=3"));
    let out = run(&["contract-check", "lambda1.alg", "--kronecker", "α,β"], &dir);
    assert!(out.status.success());
    assert!(stdout(&out).contains("contraction=match=true"));
}

#[test]
fn localize_then_subalgebra_files_parse_back() {
    let dir = setup();
    let out = run(
        &["localize", "lambda1.alg", "--kronecker", "α,β", "--mu", "2", "-o", "loc.alg"],
        &dir,
    );
    assert!(out.status.success());
    let out = run(
        &[
            "subalgebra",
            "loc.alg",
            "--vertices",
            "0,0t,1,3,3t",
            "--length-bound",
            "2",
            "-o",
            "sub.alg",
        ],
        &dir,
    );
    assert!(out.status.success());
    let out = run(&["validate", "sub.alg"], &dir);
    // The subalgebra presentation is not gentle (relations are not
    // quadratic monomials) but it must parse: validate reports rather
    // than erroring out.
    assert!(out.status.code() == Some(0) || out.status.code() == Some(1));
    let text = std::fs::read_to_string(dir.join("sub.alg")).unwrap();
    assert!(text.contains("[δα]"));
    assert!(text.contains("# provenance: subalgebra"));
}
