//! End-to-end tests of the `ivplab` binary: exit codes, file round trips,
//! and deterministic output.

use std::process::{Command, Output};

fn ivplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivplab"))
        .args(args)
        .output()
        .expect("failed to spawn ivplab")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({}): {}",
            e,
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn construct_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    let path = path.to_str().unwrap();

    let out = ivplab(&["construct", "--N", "3", "--p", "2", "--out", path]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["verdicts"]["fixed_divisor"], "4");
    assert_eq!(report["verdicts"]["denominator_exponent"], 2);

    let file: serde_json::Value =
        serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    assert_eq!(file["N"], 3);
    assert_eq!(file["p"], "2");
    assert_eq!(file["denominator_exponent"], 2);

    let out = ivplab(&["verify", "--witness", path]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["verdicts"]["pass"], true);
    assert_eq!(report["verdicts"]["counts"], serde_json::json!([[1, 1], [2, 1], [3, 2]]));
}

#[test]
fn construct_rejects_bad_params() {
    assert_eq!(ivplab(&["construct", "--N", "1", "--p", "2"]).status.code(), Some(2));
    assert_eq!(ivplab(&["construct", "--N", "2", "--p", "4"]).status.code(), Some(2));
    assert_eq!(ivplab(&["construct", "--N", "2", "--p", "x"]).status.code(), Some(2));
}

#[test]
fn tampered_witness_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    let out = ivplab(&["construct", "--N", "2", "--p", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let mut file: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    // Shift one coefficient of f₁; loading must fail with a non-zero code.
    let c0 = file["f"][0]["coeffs"][0].as_str().unwrap().to_owned();
    let bumped: i64 = c0.parse::<i64>().unwrap() + 1;
    file["f"][0]["coeffs"][0] = serde_json::json!(bumped.to_string());
    std::fs::write(&path, serde_json::to_vec(&file).unwrap()).unwrap();

    let out = ivplab(&["verify", "--witness", path.to_str().unwrap()]);
    let code = out.status.code().unwrap();
    assert!(code == 1 || code == 2 || code == 3, "unexpected exit code {}", code);
    assert_ne!(code, 0);
}

#[test]
fn verify_without_witness_file() {
    let out = ivplab(&["verify", "--N", "2", "--p", "3", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["verdicts"]["pass"], true);
    assert_eq!(report["verdicts"]["irreducible"], true);
}

#[test]
fn verify_requires_args() {
    let out = ivplab(&["verify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_non_integer_valued_element() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("element.json");
    // x/2 is not integer-valued; the command still reports cleanly (exit 0).
    std::fs::write(
        &path,
        br#"{"basis":[{"coeffs":["0","1"]}],"expo":[1],"denominator":"2"}"#,
    )
    .unwrap();
    let out = ivplab(&["analyze", "--element", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["verdicts"]["integer_valued"], false);
    assert_eq!(report["verdicts"]["image_primitive"], false);
}

#[test]
fn analyze_binomial() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("element.json");
    std::fs::write(
        &path,
        br#"{"basis":[{"coeffs":["0","1"]},{"coeffs":["-1","1"]}],"expo":[1,1],"denominator":"2"}"#,
    )
    .unwrap();
    let out = ivplab(&["analyze", "--element", path.to_str().unwrap(), "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["verdicts"]["integer_valued"], true);
    assert_eq!(report["verdicts"]["image_primitive"], true);
    assert_eq!(report["verdicts"]["irreducible"], true);
    assert_eq!(report["verdicts"]["counts"], serde_json::json!([[1, 1], [2, 1], [3, 1]]));
    assert_eq!(
        report["verdicts"]["square_free_criterion"],
        "ABSOLUTELY_IRREDUCIBLE"
    );
}

#[test]
fn analyze_malformed_element() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("element.json");
    std::fs::write(&path, b"{ not json").unwrap();
    let out = ivplab(&["analyze", "--element", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_compare_agrees() {
    let out = ivplab(&["oracle-compare", "--N", "2", "--p", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["agrees"], true);
}

#[test]
fn no_timings_output_is_deterministic() {
    let a = ivplab(&["--no-timings", "verify", "--N", "2", "--p", "2"]);
    let b = ivplab(&["--no-timings", "verify", "--N", "2", "--p", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn threads_flag_validated() {
    let out = ivplab(&["--threads", "0", "verify", "--N", "2", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ivplab(&["--threads", "4", "verify", "--N", "2", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
}
