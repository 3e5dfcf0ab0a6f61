use std::path::Path;
use std::process::{Command, Output};

use multicorr::states::{ghz, state_to_json};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multicorr"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ghz_file(dir: &Path) -> String {
    let path = dir.join("ghz3.json");
    std::fs::write(&path, state_to_json(&ghz(3, 2).unwrap())).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn compute_dtc_of_ghz() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["compute", &ghz_file(dir.path()), "I"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "3.000000000 bits\n");
}

#[test]
fn compute_j_of_ghz_is_infinite() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["compute", &ghz_file(dir.path()), "J"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "inf (support violation)\n");
}

#[test]
fn compute_in_nats_and_cross_term() {
    let dir = tempfile::tempdir().unwrap();
    let file = ghz_file(dir.path());
    let out = run(&["compute", &file, "I", "--base", "e"]);
    assert_eq!(
        stdout(&out),
        format!("{:.9} nats\n", 3.0 * std::f64::consts::LN_2)
    );
    let out = run(&["compute", &file, "cross:3,1"]);
    assert_eq!(stdout(&out), "inf (support violation)\n");
}

#[test]
fn bad_trace_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad_trace.json");
    std::fs::write(
        &path,
        r#"{"dims": [2], "matrix": [[[0.6, 0], [0, 0]], [[0, 0], [0.6, 0]]]}"#,
    )
    .unwrap();
    let out = run(&["compute", path.to_str().unwrap(), "I"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("NotUnitTrace"), "{}", stderr(&out));
}

#[test]
fn syntax_errors_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        "{\n  \"dims\": [2],\n  \"matrix\": [[[1, 0] [0, 0]]]\n}\n",
    )
    .unwrap();
    let out = run(&["compute", path.to_str().unwrap(), "I"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn missing_file_exits_with_code_2() {
    let out = run(&["compute", "/nonexistent/state.json", "I"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["compute", &ghz_file(dir.path()), "eq4", "--cap", "64"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("exceeds the cap"));
}

#[test]
fn report_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = run(&[
        "compute",
        &ghz_file(dir.path()),
        "report",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("J_3"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["report"]["j_n"]["value"], "inf");
    assert_eq!(v["report"]["j_n"]["infinite"], true);
}

#[test]
fn ghz_demo_names_the_leaked_direction() {
    let out = run(&["demo", "ghz"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("3.000000000 bits"));
    assert!(
        text.contains("|000111>") && text.contains("|111000>"),
        "{text}"
    );
}

#[test]
fn unknown_demo_is_rejected() {
    let out = run(&["demo", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown demo"));
}

#[test]
fn sweep_output_is_reproducible() {
    let args = [
        "sweep",
        "--dims",
        "2,2",
        "--samples",
        "5",
        "--seed",
        "3",
        "--ensemble",
        "rank-2",
        "--no-timings",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 6);
    let summary: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(summary["summary"]["jtilde_flagged"], 0);
}

#[test]
fn sweep_to_file_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.jsonl");
    let out = run(&[
        "sweep",
        "--dims",
        "2,2",
        "--samples",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"samples\": 2"));
    let written = std::fs::read_to_string(path).unwrap();
    assert_eq!(written.lines().count(), 3);
    assert!(written.contains("timings_ms"));
}

#[test]
fn invalid_sweep_config_exits_with_code_2() {
    let out = run(&["sweep", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["sweep", "--dims", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_round_trips_through_compute() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let out = run(&["generate", "w", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["compute", path.to_str().unwrap(), "eq3"]);
    let expected = run(&["compute", path.to_str().unwrap(), "I"]);
    assert_eq!(stdout(&out), stdout(&expected));
}
