//! End-to-end subprocess tests of the binary: output shapes, exit codes,
//! and file handling.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn fident(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fident"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn json_stdout(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn write_file(content: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    file.write_all(content.as_bytes()).expect("write");
    file
}

const ADJ_IDENTITY: &str = "n = 2\nm = 1\nq0 = adj(x)\nq1 = 0\n";

#[test]
fn charpoly_reports_closed_forms() {
    let out = fident(&["charpoly", "--n", "2"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["command"], "charpoly");
    assert_eq!(v["cayley_hamilton"], true);
    // c = [det, -tr, 1]: three coefficient slots at n = 2.
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
    // det(Y) serializes as two unit-coefficient terms.
    assert_eq!(v["determinant"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_prints_the_central_scalar() {
    let file = write_file(ADJ_IDENTITY);
    let out = fident(&["verify", "--file", file.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["central"], true);
    // The scalar is det(Y): terms x11 x22 and -x12 x21.
    let scalar = v["scalar"].as_array().unwrap();
    assert_eq!(scalar.len(), 2);
}

#[test]
fn verify_rejects_non_identities_with_exit_1() {
    let file = write_file("n = 2\nm = 1\nq0 = x\nq1 = 0\n");
    let out = fident(&["verify", "--file", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_stdout(&out);
    assert_eq!(v["central"], false);
}

#[test]
fn decompose_cross_checks_the_oracle() {
    let file = write_file(ADJ_IDENTITY);
    let out = fident(&["decompose", "--file", file.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["decomposition"]["verified"], true);
    assert_eq!(v["decomposition"]["case"], "b");
    assert_eq!(v["oracle"]["ran"], true);
    assert_eq!(v["oracle"]["lambda_match"], true);
    // lambda = 1.
    let lambda_terms = v["decomposition"]["lambda"]["poly"].as_array().unwrap();
    assert_eq!(lambda_terms.len(), 1);
    assert_eq!(lambda_terms[0][0], "1");

    let out = fident(&[
        "decompose",
        "--file",
        file.path().to_str().unwrap(),
        "--no-oracle",
    ]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["oracle"]["ran"], false);
}

#[test]
fn decompose_handles_case_a_files() {
    let file = write_file("n = 2\nm = 1\nq0 = x^2\nq1 = -x^2\n");
    let out = fident(&["decompose", "--file", file.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["decomposition"]["case"], "a");
}

#[test]
fn standard_form_of_commuting_expression() {
    // Every well-typed expression in x commutes with x, so this subcommand
    // succeeds on all valid inputs; the non-commuting exit path is covered
    // at the library level.
    let out = fident(&["standard-form", "--n", "2", "--expr", "tr(x)*x - x^2"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["commuting"], true);
    assert_eq!(v["standard_form"]["verified"], true);
}

#[test]
fn l2_subcommand_reports_p() {
    let out = fident(&["l2", "--n", "2", "--q", "x^2", "--r", "x^2"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["postcondition_verified"], true);
    assert_eq!(v["p"]["d"], 1);
}

#[test]
fn adjugate_solve_zero_and_lambda() {
    let out = fident(&["adjugate-solve", "--n", "2", "--m", "1", "--expr", "0"]);
    assert!(out.status.success());
    assert_eq!(json_stdout(&out)["result"], "zero");

    let out = fident(&["adjugate-solve", "--n", "2", "--m", "1", "--expr", "adj(x)"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["result"], "lambda");
    assert_eq!(v["lambda"]["d"], 0);

    let out = fident(&["adjugate-solve", "--n", "2", "--m", "1", "--expr", "x"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn file_errors_exit_2() {
    let out = fident(&["verify", "--file", "/nonexistent/path.fid"]);
    assert_eq!(out.status.code(), Some(2));

    let file = write_file("n = 2\nm = 1\nq0 = tr(\nq1 = 0\n");
    let out = fident(&["verify", "--file", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "stderr: {stderr}");
}

#[test]
fn diagnostics_go_to_stderr_not_stdout() {
    let file = write_file("n = 2\nm = 1\nq0 = x\nq1 = 0\n");
    let out = fident(&["verify", "--file", file.path().to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(!stdout.contains("error"));
    assert!(stderr.contains("error"));
    // NO_COLOR is set: no ANSI escapes anywhere.
    assert!(!stderr.contains('\x1b'));
}
