//! End-to-end tests of the installed binary: exit codes, output shapes,
//! stdin/file plumbing, and the JSON report sink.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclotome"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary exits")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

// Tests run in one process, so the pid alone does not make names unique.
fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("cyclotome-{}-{name}", std::process::id()))
}

#[test]
fn construct_prints_program_text() {
    let out = run(&["construct", "--p", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("SLPv1 p=5 m=2 g=2\n"), "header: {text}");
    assert!(text.contains("LABEL") && text.contains("CONST"));
    assert!(stderr(&out).contains("30 instructions (budget 300), built at 64 bits"));
}

#[test]
fn construct_then_verify_through_a_file() {
    let path = scratch("p17.slp");
    let out = run(&["construct", "--p", "17", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "construct: {}", stderr(&out));

    let out = run(&["verify", "--in", path.to_str().unwrap()]);
    assert!(out.status.success(), "verify: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("172 instructions < 3468 budget"));
    assert!(text.contains("level  0:") && text.contains("level  4:"));
    assert!(text.contains("PASS at 64 bits: all 16 roots constructed"));
    assert!(text.contains("<= 1.0e-12"));
    let _ = std::fs::remove_file(path);
}

#[test]
fn verify_reads_from_stdin() {
    let text = stdout(&run(&["construct", "--p", "5"]));
    let out = run_with_stdin(&["verify"], &text);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("PASS at 64 bits: all 4 roots constructed"));
}

#[test]
fn corrupted_program_exits_one() {
    let text = stdout(&run(&["construct", "--p", "5"]));
    let bad = text.replacen("\n2 ADD 0 0\n", "\n2 SUB 0 0\n", 1);
    assert_ne!(bad, text, "tamper target line missing");
    let out = run_with_stdin(&["verify"], &bad);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("FAIL:"), "stderr: {}", stderr(&out));
}

#[test]
fn malformed_text_exits_two() {
    let out = run_with_stdin(&["verify"], "this is not a program\n");
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("error:") && err.contains("line 1"), "stderr: {err}");
}

#[test]
fn missing_subcommand_exits_two() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_fermat_prime_exits_two() {
    let out = run(&["construct", "--p", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr(&out), "error: 7 is not a Fermat prime\n");
}

#[test]
fn precision_below_the_floor_exits_two() {
    let out = run(&["construct", "--p", "5", "--precision-bits", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr(&out), "error: precision must be at least 53 bits\n");
}

#[test]
fn count_reports_the_closed_form_without_building() {
    let out = run(&["count", "--p", "65537"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "p=65537 m=16 g=3: 716384932 instructions, budget 12p² = 51541180428, below: true\n"
    );
}

#[test]
fn counts_prints_every_level_and_cross_checks() {
    let out = run(&["counts", "--p", "17"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "k=0: 4\nk=1: 1 1\nk=2: 0 0 0 1\nk=3: 0 0 0 0 0 0 0 0\n"
    );
    assert!(stderr(&out).contains("cross-checked against brute-force"));
}

#[test]
fn counts_can_focus_one_level() {
    let out = run(&["counts", "--p", "17", "--k", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "k=1: 1 1\n");
}

#[test]
fn counts_rejects_a_level_at_or_past_the_top() {
    let out = run(&["counts", "--p", "5", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr(&out), "error: k must be below m = 2\n");
}

#[test]
fn periods_prints_reference_values_and_gaps() {
    let out = run(&["periods", "--p", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("T[0,0] = -1e0"));
    assert!(text.contains("T[1,0] = 6.18033988749894848"));
    assert!(text.contains("# level 1 minimum gap 2.236068e0"));
    assert!(text.contains("T[2,3] = "));
    assert!(text.contains("# level 2 minimum gap 1.175571e0"));
}

#[test]
fn export_defaults_to_dot() {
    let text = stdout(&run(&["construct", "--p", "3"]));
    let out = run_with_stdin(&["export"], &text);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph slp {"));
    assert!(dot.contains("n0 [label=\"0 ONE"));
    assert!(dot.trim_end().ends_with('}'));
}

#[test]
fn export_text_is_the_identity_on_canonical_input() {
    let text = stdout(&run(&["construct", "--p", "5"]));
    let out = run_with_stdin(&["export", "--format", "text"], &text);
    assert!(out.status.success());
    assert_eq!(stdout(&out), text);
}

#[test]
fn verify_appends_one_json_line_per_run() {
    let path = scratch("report.jsonl");
    let _ = std::fs::remove_file(&path);
    let text = stdout(&run(&["construct", "--p", "5"]));
    for _ in 0..2 {
        let out = run_with_stdin(&["verify", "--report", path.to_str().unwrap()], &text);
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    }
    let body = std::fs::read_to_string(&path).expect("report written");
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines.len(), 2);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid JSON");
        assert_eq!(v["p"], 5);
        assert_eq!(v["m"], 2);
        assert_eq!(v["op_count"], 30);
        assert_eq!(v["bound"], 300);
        assert_eq!(v["bound_ok"], true);
        assert_eq!(v["coverage_ok"], true);
        assert!(v["max_dev"].as_f64().unwrap() < 1e-12);
        assert!(v["elapsed_ms"].is_u64());
    }
    let _ = std::fs::remove_file(&path);
}
