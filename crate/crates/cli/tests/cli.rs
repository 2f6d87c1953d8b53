//! End-to-end tests of the `matchstick` binary: output shapes, file round
//! trips, and exit codes.

use serde_json::Value;
use std::fs;
use std::process::Command;

fn matchstick(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_matchstick"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

fn json_tail(stdout: &str) -> Value {
    // Skips the human-readable first line that `solve` prints.
    let rest: String = stdout.lines().skip(1).collect::<Vec<_>>().join("\n");
    serde_json::from_str(&rest).expect("JSON after the summary line")
}

#[test]
fn solve_prints_the_angle_then_the_report() {
    let (code, stdout, _) = matchstick(&["solve", "--builtin"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next().unwrap(), "mu = 38.067338069376");

    let report = json_tail(&stdout);
    assert_eq!(report["param_name"], "mu");
    assert!(report["residual"].as_f64().unwrap().abs() <= 1e-12);
    assert_eq!(report["bracket_lo"], 37.0);
    assert_eq!(report["bracket_hi"], 39.0);
}

#[test]
fn build_emits_the_embedding_json_shape() {
    let (code, stdout, _) = matchstick(&["build", "--builtin", "--param", "mu=38.0"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["points"].as_object().unwrap().len(), 54);
    assert_eq!(v["edges"].as_array().unwrap().len(), 81);
    assert_eq!(v["closing"], serde_json::json!(["P53", "P54"]));
    assert_eq!(v["params"]["mu"], 38.0);
    assert_eq!(v["points"]["P1"], serde_json::json!([0.0, 0.0]));
    assert_eq!(v["points"]["P2"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn build_honors_parameter_overrides() {
    let (code, stdout, _) = matchstick(&["build", "--builtin", "--param", "mu=37.5"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["params"]["mu"], 37.5);
}

#[test]
fn build_then_verify_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let at_38 = dir.path().join("at38.json");
    let solved = dir.path().join("solved.json");

    let (code, _, _) = matchstick(&[
        "build",
        "--builtin",
        "--param",
        "mu=38.0",
        "-o",
        at_38.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, stdout, _) = matchstick(&["verify", "--embedding", at_38.to_str().unwrap()]);
    assert_eq!(code, 1, "closing length is off at 38 degrees");
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["passed"], false);
    assert!((report["closing_length"].as_f64().unwrap() - 1.000705348169155).abs() <= 1e-9);
    // The JSON format does not carry the symmetry declaration.
    assert!(report["symmetry_residual"].is_null());

    let (code, _, _) = matchstick(&[
        "build",
        "--builtin",
        "--at-solved",
        "-o",
        solved.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, stdout, _) = matchstick(&["verify", "--embedding", solved.to_str().unwrap()]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn script_and_embedding_verification_agree() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("emb.json");
    matchstick(&[
        "build",
        "--builtin",
        "--param",
        "mu=38.0",
        "-o",
        file.to_str().unwrap(),
    ]);

    let (_, from_script, _) = matchstick(&["verify", "--builtin", "--param", "mu=38.0"]);
    let (_, from_file, _) = matchstick(&["verify", "--embedding", file.to_str().unwrap()]);
    let mut a: Value = serde_json::from_str(&from_script).unwrap();
    let mut b: Value = serde_json::from_str(&from_file).unwrap();
    // Only the symmetry residual differs: the script run knows the mapping,
    // the embedding file does not.
    assert!(a["symmetry_residual"].is_number());
    assert!(b["symmetry_residual"].is_null());
    a.as_object_mut().unwrap().remove("symmetry_residual");
    b.as_object_mut().unwrap().remove("symmetry_residual");
    assert_eq!(a, b);
}

#[test]
fn verify_tolerances_are_adjustable() {
    // At 38 degrees only the closing length is off target; a loose unit
    // tolerance lets the report pass.
    let (code, stdout, _) = matchstick(&[
        "verify",
        "--builtin",
        "--param",
        "mu=38.0",
        "--unit-tol",
        "1e-2",
    ]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn sweep_emits_csv_rows() {
    let (code, stdout, _) = matchstick(&["sweep", "--builtin", "--steps", "5"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "mu_deg,closing_length,min_clearance,crossings");
    assert_eq!(lines.len(), 6);
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        assert!(fields[0].parse::<f64>().is_ok());
        assert_eq!(fields[3], "false");
    }
    assert_eq!(
        lines[1].split(',').next().unwrap().parse::<f64>().unwrap(),
        37.0
    );
    assert_eq!(
        lines[5].split(',').next().unwrap().parse::<f64>().unwrap(),
        39.0
    );
}

#[test]
fn render_draws_every_element() {
    let (code, svg, _) = matchstick(&["render", "--builtin", "--at-solved", "--labels"]);
    assert_eq!(code, 0);
    assert!(svg.starts_with("<?xml version=\"1.0\""));
    assert_eq!(svg.matches("<line ").count(), 81);
    assert_eq!(svg.matches("<circle ").count(), 54);
    assert_eq!(svg.matches("<text ").count(), 54);
}

#[test]
fn render_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("graph.svg");
    let (code, stdout, _) = matchstick(&["render", "--builtin", "-o", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let content = fs::read_to_string(&file).unwrap();
    assert!(content.starts_with("<?xml"));
    assert!(content.trim_end().ends_with("</svg>"));
}

#[test]
fn a_script_file_goes_through_the_whole_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("triangle.msc");
    fs::write(
        &script,
        "param a = 90 range 0 180\n\
         points P1 P2\n\
         angle_edge P3 from P1 ref P2 angle a ccw\n\
         closing_edge P2 P3\n\
         solve a target 1 bracket 10 170\n",
    )
    .unwrap();

    let (code, stdout, _) = matchstick(&["solve", script.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next().unwrap(), "a = 60.000000000000");

    let (code, stdout, _) = matchstick(&["build", script.to_str().unwrap(), "--at-solved"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["points"].as_object().unwrap().len(), 3);
    assert!((v["params"]["a"].as_f64().unwrap() - 60.0).abs() <= 1e-9);
}

#[test]
fn usage_mistakes_exit_2() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["build"],
        vec!["solve", "--builtin", "--lo", "37.5"],
        vec!["verify", "--builtin", "--param", "nope=3"],
        vec!["build", "--builtin", "--param", "mu"],
        vec!["render", "--builtin", "extra.msc"],
    ];
    for args in cases {
        let (code, _, stderr) = matchstick(&args);
        assert_eq!(code, 2, "args {args:?} gave stderr: {stderr}");
    }
}

#[test]
fn runtime_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.msc");
    fs::write(&bad, "points P1\n").unwrap();

    let (code, _, stderr) = matchstick(&["build", "/definitely/not/here.msc"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("cannot read"));

    let (code, _, stderr) = matchstick(&["build", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(stderr.contains("line 1"), "stderr: {stderr}");

    let (code, _, stderr) = matchstick(&["solve", "--builtin", "--lo", "38.2", "--hi", "39"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("no sign change"), "stderr: {stderr}");

    let (code, _, stderr) = matchstick(&["build", "--builtin", "--param", "mu=45"]);
    assert_eq!(code, 3, "out-of-range value is a construction error");
    assert!(stderr.contains("range"), "stderr: {stderr}");
}
