use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantor-signs"))
        .args(args)
        .env_remove("CANTOR_SIGNS_CHECKED")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .trim_end()
        .to_string()
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn encode_outputs() {
    assert_eq!(
        stdout(&["encode", "--system", "pre:;per:2+,3-", "--x", "1/6"]),
        r#"{"pre":[1,2],"per":[],"n":2,"m":0,"finite":true,"value":"1/6"}"#
    );
    assert_eq!(
        stdout(&["encode", "--system", "pre:;per:10+", "--x", "1/3"]),
        r#"{"pre":[],"per":[3],"n":0,"m":1,"finite":false,"value":"1/3"}"#
    );
    assert_eq!(
        stdout(&[
            "encode",
            "--system",
            "pre:;per:2-,2+",
            "--x",
            "-2/3",
            "--checked"
        ]),
        r#"{"pre":[],"per":[1,0],"n":0,"m":2,"finite":false,"value":"-2/3"}"#
    );
}

#[test]
fn encode_is_deterministic_and_checked_mode_agrees() {
    let args = ["encode", "--system", "pre:3-,5+;per:7-,2+", "--x", "-11/97"];
    let first = run(&args);
    assert_eq!(first.stdout, run(&args).stdout);
    let checked = Command::new(env!("CARGO_BIN_EXE_cantor-signs"))
        .args(args)
        .env("CANTOR_SIGNS_CHECKED", "1")
        .output()
        .unwrap();
    assert!(checked.status.success());
    assert_eq!(first.stdout, checked.stdout);
}

#[test]
fn system_formats() {
    let want = r#"{"value":"-2/3"}"#;
    let json = r#"{"preperiod":[],"period":[[2,-1],[2,1]]}"#;
    assert_eq!(
        stdout(&["eval", "--system", json, "--digits", "(1,0)"]),
        want
    );

    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("system.txt");
    std::fs::write(&path, "pre:;per:2-,2+\n").unwrap();
    let arg = format!("@{}", path.display());
    assert_eq!(
        stdout(&["eval", "--system", &arg, "--digits", "(1,0)"]),
        want
    );
}

#[test]
fn eval_outputs() {
    assert_eq!(
        stdout(&["eval", "--system", "pre:;per:10+", "--digits", "3,3,3"]),
        r#"{"value":"333/1000"}"#
    );
}

#[test]
fn classify_outputs() {
    assert_eq!(
        stdout(&["classify", "--system", "pre:;per:2+,3-", "--x", "1/6"]),
        r#"{"finite":true,"n0":2,"preperiod":2,"period":0}"#
    );
    assert_eq!(
        stdout(&["classify", "--system", "pre:;per:10+", "--x", "1/3"]),
        r#"{"finite":false,"n0":null,"preperiod":0,"period":1}"#
    );
    assert_eq!(
        stdout(&["classify", "--system", "pre:;per:10+", "--x", "0"]),
        r#"{"finite":true,"n0":0,"preperiod":0,"period":0}"#
    );
}

#[test]
fn interval_outputs() {
    assert_eq!(
        stdout(&["bounds", "--system", "pre:;per:2+,3-"]),
        r#"{"lower":"-2/5","upper":"3/5"}"#
    );
    assert_eq!(
        stdout(&["cylinder", "--system", "pre:;per:2+", "--base", "1"]),
        r#"{"lower":"1/2","upper":"1"}"#
    );
}

#[test]
fn dual_outputs() {
    assert_eq!(
        stdout(&["dual", "--system", "pre:;per:10+", "--digits", "1(9)"]),
        concat!(
            r#"{"value":"1/5","dual":true,"#,
            r#""min_tail":{"pre":[2],"per":[],"n":1,"m":0,"finite":true,"value":"1/5"},"#,
            r#""max_tail":{"pre":[1],"per":[9],"n":1,"m":1,"finite":false,"value":"1/5"}}"#
        )
    );
    assert_eq!(
        stdout(&["dual", "--system", "pre:;per:2+,3-", "--digits", "1,2"]),
        r#"{"value":"1/6","dual":false,"min_tail":null,"max_tail":null}"#
    );
}

#[test]
fn verify_and_self_test() {
    assert_eq!(
        stdout(&[
            "verify",
            "--system",
            "pre:;per:2+,3-",
            "--count",
            "100",
            "--seed",
            "7"
        ]),
        r#"{"pass":100,"fail":0}"#
    );
    assert_eq!(
        stdout(&["self-test", "--count", "50", "--seed", "3"]),
        r#"{"pass":54,"fail":0}"#
    );
}

#[test]
fn exit_codes() {
    // Parse errors.
    assert_eq!(
        exit_code(&["encode", "--system", "pre:;per:2+", "--x", "1/0"]),
        2
    );
    assert_eq!(
        exit_code(&["encode", "--system", "pre:;per:", "--x", "1/2"]),
        2
    );
    assert_eq!(
        exit_code(&["encode", "--system", "pre:;per:1+", "--x", "1/2"]),
        2
    );
    assert_eq!(
        exit_code(&["eval", "--system", "pre:;per:2+", "--digits", "1,("]),
        2
    );
    assert_eq!(exit_code(&["encode", "--system", "pre:;per:2+"]), 2);
    // Domain errors.
    assert_eq!(
        exit_code(&["encode", "--system", "pre:;per:2+", "--x", "7/3"]),
        3
    );
    assert_eq!(
        exit_code(&["encode", "--system", "pre:;per:2-", "--x", "1/3"]),
        3
    );
    // Inadmissible digits.
    assert_eq!(
        exit_code(&["eval", "--system", "pre:;per:2+", "--digits", "0,2"]),
        4
    );
    assert_eq!(
        exit_code(&["cylinder", "--system", "pre:;per:3-", "--base", "3"]),
        4
    );
}

#[test]
fn bound_violation_names_the_bound() {
    let out = run(&["encode", "--system", "pre:;per:2+", "--x", "7/3"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("upper bound"), "{err}");
    let out = run(&["encode", "--system", "pre:;per:2+", "--x", "-1/3"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("lower bound"), "{err}");
}
