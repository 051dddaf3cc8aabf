//! Command-line behavior: outputs, exit codes and determinism.

use hecke_core::cli::{parse_gram, run};
use serde_json::Value;

fn json_of(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["hecke"];
    argv.extend_from_slice(args);
    let (code, out, err) = run(argv);
    let v = if out.is_empty() {
        serde_json::from_str(&err).unwrap_or(Value::Null)
    } else {
        serde_json::from_str(&out).unwrap()
    };
    (code, v)
}

#[test]
fn eigenvalue_command() {
    let (code, v) = json_of(&[
        "hecke",
        "eigenvalue",
        "--k",
        "1",
        "--n",
        "1",
        "--j",
        "1",
        "--p",
        "3",
        "--chi",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["lambda"], "4/1");
}

#[test]
fn neighbors_command() {
    let (code, v) = json_of(&[
        "lattice",
        "neighbors",
        "--gram",
        "2I3",
        "--p",
        "3",
        "--j",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 4);
    assert_eq!(v["formula"], "4");
}

#[test]
fn apply_command_reports_sqrt_part() {
    let (code, v) = json_of(&[
        "hecke", "apply", "--gram", "2I3", "--p", "2", "--n", "1", "--j", "1", "--t", "[[2]]",
        "--op", "tj",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["value"]["b"], "6/1");
    assert_eq!(v["value"]["a"], "0/1");
}

#[test]
fn verification_failure_exits_one() {
    let (code, v) = json_of(&[
        "hecke",
        "verify-annihilate",
        "--gram",
        "2I3",
        "--p",
        "3",
        "--n",
        "2",
        "--a",
        "1",
        "--bound",
        "2",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}

#[test]
fn usage_and_domain_errors_exit_two() {
    let (_, out, err) = run(["hecke", "hecke", "eigenvalue", "--k", "1"]);
    assert!(out.is_empty());
    assert!(err.contains("--n"), "{err}");
    let (code, v) = json_of(&["lattice", "level", "--gram", "nonsense"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("gram"));
    let (code, v) = json_of(&[
        "--cap", "10", "lattice", "between", "--gram", "2I3", "--p", "3",
    ]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("cap"), "{v}");
}

#[test]
fn output_is_deterministic() {
    let argv = [
        "hecke", "jacobi", "verify", "--gram", "2I3", "--p", "3", "--n", "1", "--j", "1",
        "--bound", "6",
    ];
    let a = run(argv);
    let b = run(argv);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
}

#[test]
fn gram_grammar() {
    assert_eq!(
        parse_gram("2I3").unwrap().entries(),
        &vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]
    );
    assert_eq!(
        parse_gram("diag:2,4").unwrap().entries(),
        &vec![vec![2, 0], vec![0, 4]]
    );
    assert_eq!(
        parse_gram("[[2,1],[1,2]]").unwrap().entries(),
        &vec![vec![2, 1], vec![1, 2]]
    );
    assert!(parse_gram("[[2,1],[0,2]]").is_err());
}

#[test]
fn coefficient_cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("hecke-cache-test-{}", std::process::id()));
    let args = [
        "hecke",
        "--cache-dir",
        dir.to_str().unwrap(),
        "theta",
        "coeffs",
        "--gram",
        "2I3",
        "--n",
        "1",
        "--bound",
        "8",
    ];
    let first = run(args);
    let second = run(args);
    assert_eq!(first, second);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
