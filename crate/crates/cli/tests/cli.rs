use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn idpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idpack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn uniform_newton_flow_on_two_vertex_torus() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let result = dir.path().join("out.json");
    let f = fixture("torus2.json");
    let out = idpack(&[
        "flow",
        "--target",
        "uniform",
        "--method",
        "newton",
        f.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--output",
        result.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert!(report["max_err"].as_f64().unwrap() < 1e-10);

    let csv = std::fs::read_to_string(&trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("iter,max_err,merit,flips,step"));
    let last: f64 = lines.last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(last < 1e-10);

    // The result file is itself a valid problem at the target.
    let again = idpack(&["curvature", result.to_str().unwrap()]);
    assert!(again.status.success());
    for k in stdout_json(&again)["curvature"].as_array().unwrap() {
        assert!(k.as_f64().unwrap().abs() < 1e-10);
    }
}

#[test]
fn twin_fixed_point_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"mesh": {"num_vertices": 1, "faces": [[0,0,0],[0,0,0]], "twins": [0,5,3,2,4,1]},
            "packing": {"coords": "euclidean", "inv_dist": [2,2,2], "radii": [1]}}"#,
    )
    .unwrap();
    let out = idpack(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "BadMatching");
    assert_eq!(err["exit_code"], 1);
}

#[test]
fn selftest_passes() {
    let out = idpack(&["selftest", "--samples", "1000", "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    for s in report["suites"].as_array().unwrap() {
        assert!(s["max_residual"].as_f64().unwrap() < s["threshold"].as_f64().unwrap());
    }
}

#[test]
fn selftest_is_deterministic() {
    let a = idpack(&["selftest", "--samples", "50", "--seed", "9"]);
    let b = idpack(&["selftest", "--samples", "50", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validate_reports_counts_and_slacks() {
    let out = idpack(&["validate", fixture("genus2.json").to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["euler_characteristic"], -2);
    assert_eq!(v["num_edges"], 9);
    assert_eq!(v["num_faces"], 6);
    assert_eq!(v["slacks"].as_array().unwrap().len(), 9);
    assert_eq!(v["delaunay"], true);
}

#[test]
fn delaunayize_writes_file_and_log() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    std::fs::write(
        &input,
        r#"{"mesh": {"num_vertices": 2, "faces": [[0,1,1],[0,1,0],[1,0,0],[1,0,1]],
                     "twins": [4,11,3,2,0,7,10,5,9,8,6,1]},
            "packing": {"coords": "euclidean", "inv_dist": [9,2,2,2,2,2], "radii": [1,1]}}"#,
    )
    .unwrap();
    let output = dir.path().join("out.json");
    let log = dir.path().join("flips.json");
    let out = idpack(&[
        "delaunayize",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--flip-log",
        log.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let flips: Value = serde_json::from_str(&std::fs::read_to_string(&log).unwrap()).unwrap();
    assert!(!flips.as_array().unwrap().is_empty());
    let check = idpack(&["validate", output.to_str().unwrap()]);
    assert_eq!(stdout_json(&check)["delaunay"], true);
}

#[test]
fn flip_budget_exhaustion_is_a_solver_failure() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    std::fs::write(
        &input,
        r#"{"mesh": {"num_vertices": 2, "faces": [[0,1,1],[0,1,0],[1,0,0],[1,0,1]],
                     "twins": [4,11,3,2,0,7,10,5,9,8,6,1]},
            "packing": {"coords": "euclidean", "inv_dist": [9,2,2,2,2,2], "radii": [1,1]}}"#,
    )
    .unwrap();
    let out = idpack(&["delaunayize", input.to_str().unwrap(), "--flip-budget", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "FlipBudgetExceeded");
}

#[test]
fn missing_and_malformed_files() {
    let out = idpack(&["curvature", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "IoError");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = idpack(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "JsonError");
}

#[test]
fn bad_target_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(fixture("torus2.json")).unwrap()).unwrap();
    v["target"] = serde_json::json!({"curvature": [0.5, 0.0]});
    std::fs::write(&path, v.to_string()).unwrap();
    let out = idpack(&["flow", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "TargetInvalid");
}

#[test]
fn canonical_and_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let canon = dir.path().join("canon.json");
    let f = fixture("torus2.json");
    let out = idpack(&["canonical", f.to_str().unwrap(), "--output", canon.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let same = idpack(&["equiv", f.to_str().unwrap(), canon.to_str().unwrap()]);
    assert!(same.status.success());
    assert_eq!(stdout_json(&same)["equivalent"], true);

    let other = idpack(&["equiv", f.to_str().unwrap(), fixture("torus1.json").to_str().unwrap()]);
    assert_eq!(stdout_json(&other)["equivalent"], false);
}

#[test]
fn euler_flow_on_genus_two_with_file_target() {
    let out = idpack(&[
        "flow",
        "--method",
        "euler",
        "--target",
        "file",
        "--tol",
        "1e-8",
        fixture("genus2.json").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_json(&out)["max_err"].as_f64().unwrap() < 1e-8);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = idpack(&["explode"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "UsageError");
}
