use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wakimoto"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(out).trim()).expect("json output")
}

const TWO_OVER_Z: &str = r#"{"coeffs":[{"m":0,"value":"2"}]}"#;

#[test]
fn classify_reports_schur_zero_for_two_over_z() {
    let out = run(&["classify", "--chi", TWO_OVER_Z]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["verdict"], "reducible");
    assert_eq!(v["case"], "schur_zero");
    assert_eq!(v["ell"], 1);
    assert_eq!(v["certificate"]["kind"], "singular_vector");
}

#[test]
fn classify_covers_each_case() {
    let cases = [
        (r#"{"coeffs":[{"m":1,"value":"1"}]}"#, "i", "irreducible"),
        (r#"{"coeffs":[{"m":0,"value":"1/2"}]}"#, "ii", "irreducible"),
        (r#"{"coeffs":[{"m":0,"value":"2"},{"m":-1,"value":"1"}]}"#, "iii", "irreducible"),
        (r#"{"coeffs":[{"m":0,"value":"-3"}]}"#, "neg_ell", "reducible"),
    ];
    for (chi, case, verdict) in cases {
        let v = json(&run(&["classify", "--chi", chi]));
        assert_eq!(v["case"], case, "{chi}");
        assert_eq!(v["verdict"], verdict, "{chi}");
    }
}

#[test]
fn verify_accepts_certificates() {
    for chi in [TWO_OVER_Z, r#"{"coeffs":[{"m":0,"value":"-3"}]}"#, r#"{"coeffs":[{"m":0,"value":"1"}]}"#] {
        let out = run(&["verify", "--chi", chi]);
        assert!(out.status.success(), "{chi}: {}", stdout(&out));
        assert_eq!(json(&out)["passed"], true);
    }
}

#[test]
fn schur_values() {
    assert_eq!(stdout(&run(&["schur", "--r", "2", "--xs", "1,1"])).trim(), "\"1\"");
    // S_2(x1, x2) = x1²/2 + x2/2
    assert_eq!(stdout(&run(&["schur", "--r", "2", "--xs", "1/2,-3"])).trim(), "\"-11/8\"");
    assert_eq!(stdout(&run(&["schur", "--r", "0"])).trim(), "\"1\"");
}

#[test]
fn enumerate_counts() {
    let v = json(&run(&["enumerate", "--max-weight", "5/2"]));
    assert_eq!(v["count"], 8);
    let v = json(&run(&["enumerate", "--max-weight", "1", "--weyl", "--charge-window", "1"]));
    assert_eq!(v["count"], 6);
}

#[test]
fn malformed_input_exits_with_usage_status() {
    for args in [
        vec!["classify", "--chi", r#"{"coeffs":[{"m":0,"value":"1/0"}]}"#],
        vec!["classify", "--chi", "{not json"],
        vec!["classify", "--chi", "/nonexistent/chi.json"],
        vec!["schur", "--r", "2", "--xs", "1,x"],
        vec!["classify", "--chi", TWO_OVER_Z, "--cutoff", "-1"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["relations", "--seed", "7", "--suite", "extraction"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["classify", "--chi", r#"{"coeffs":[{"m":0,"value":"3"},{"m":-1,"value":"1"},{"m":-2,"value":"1"}]}"#];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
