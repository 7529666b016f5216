mod common;

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use common::WORKED_EXAMPLES;

fn lyagraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lyagraph"))
        .args(args)
        .env_remove("LYAGRAPH_BUDGET")
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lyagraph"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn file(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes_on_worked_examples() {
    for (i, &(name, text, s2xs1, s3)) in WORKED_EXAMPLES.iter().enumerate() {
        let path = file(&format!("worked_{i}.lg"), text);
        for (target, expected) in [("s2xs1", s2xs1), ("s3", s3)] {
            let out = lyagraph(&["check", &path, "--target", target]);
            let code = if expected { 0 } else { 1 };
            assert_eq!(out.status.code(), Some(code), "{name} on {target}");
            let word = if expected { "result: REALIZABLE" } else { "result: NOT REALIZABLE" };
            assert!(stdout(&out).contains(word), "{name}");
        }
    }
}

#[test]
fn invalid_input_exits_with_two() {
    let self_loop = file("self_loop.lg", "edge a -> a g=0\n");
    let out = lyagraph(&["check", &self_loop, "--target", "s3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 11"));

    let disconnected = file("disconnected.lg", "vertex a sing 0\nvertex b sing 3\n");
    let out = lyagraph(&["check", &disconnected, "--target", "s2xs1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("disconnected"));

    let out = lyagraph(&["check", "/nonexistent/graph.lg", "--target", "s3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = lyagraph(&["check", &self_loop, "--target", "torus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_report_and_stdin() {
    let (_, text, _, _) = WORKED_EXAMPLES[2];
    let out = with_stdin(&["check", "-", "--target", "s2xs1", "--json"], text);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["realizable"], true);
    assert_eq!(doc["beta"], 0);
    assert_eq!(doc["sft_vertices"][0]["class"], "TypeEq");
    assert_eq!(doc["sft_vertices"][0]["k"], 2);
}

#[test]
fn output_is_deterministic() {
    let (_, text, _, _) = WORKED_EXAMPLES[5];
    let path = file("deterministic.lg", text);
    let a = lyagraph(&["explain", &path, "--target", "s3"]);
    let b = lyagraph(&["explain", &path, "--target", "s3"]);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("not a tree"));
}

#[test]
fn invariants_command() {
    let path = file("matrix.lg", "vertex v sft 2x2 [1, 1, 1, 1]\n");
    let out = lyagraph(&["invariants", &path, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["k"], 0);
    assert_eq!(doc["parry_sullivan"], 1);
    assert_eq!(doc["bowen_franks"], serde_json::json!([1, 1]));

    let (_, text, _, _) = WORKED_EXAMPLES[0];
    let not_a_matrix = file("not_a_matrix.lg", text);
    assert_eq!(lyagraph(&["invariants", &not_a_matrix]).status.code(), Some(2));
}

#[test]
fn enumerate_counts_and_worker_independence() {
    let base = ["enumerate", "--max-vertices", "3", "--max-weight", "1", "--target", "s2xs1"];
    let one = lyagraph(&[&base[..], &["--workers", "1"]].concat());
    let three = lyagraph(&[&base[..], &["--workers", "3"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    let text = stdout(&one);
    assert!(text.starts_with("# graph 1: not realizable on S2xS1\nvertex v1 sing 0\n"));

    let count = lyagraph(&[&base[..], &["--count-only", "--json"]].concat());
    let doc: serde_json::Value = serde_json::from_slice(&count.stdout).unwrap();
    let listed = text.matches("# graph ").count() as u64;
    assert_eq!(doc["total"].as_u64(), Some(listed));
    let realizable = text.matches(": realizable on").count() as u64;
    assert_eq!(doc["realizable"].as_u64(), Some(realizable));
}

#[test]
fn enumerate_budget_and_matrix_pool() {
    let too_big = lyagraph(&[
        "enumerate", "--max-vertices", "5", "--max-weight", "2", "--target", "s3", "--count-only",
    ]);
    assert_eq!(too_big.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&too_big.stderr).contains("budget"));

    let small_budget = Command::new(env!("CARGO_BIN_EXE_lyagraph"))
        .args(["enumerate", "--max-vertices", "2", "--max-weight", "0", "--target", "s3", "--count-only"])
        .env("LYAGRAPH_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(small_budget.status.code(), Some(2));

    let pool = file("pool.lg", "vertex m sft 1x1 [3]\n");
    let out = lyagraph(&[
        "enumerate", "--max-vertices", "1", "--max-weight", "0", "--matrices", &pool, "--target",
        "s3", "--count-only",
    ]);
    assert_eq!(stdout(&out), "graphs: 7\nrealizable on S3: 0\n");
}

#[test]
fn random_and_transform() {
    let args = ["random", "--seed", "42", "--max-vertices", "5", "--max-weight", "2", "--max-parallel", "2"];
    let a = lyagraph(&args);
    let b = lyagraph(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let once = with_stdin(&["transform", "--reverse", "-"], &stdout(&a));
    let twice = with_stdin(&["transform", "--reverse", "-", "--format", "dsl"], &stdout(&once));
    assert_eq!(twice.stdout, a.stdout);

    let json = with_stdin(&["transform", "--reverse", "-", "--format", "json"], &stdout(&a));
    assert!(stdout(&json).starts_with('{'));
    let back = with_stdin(&["transform", "--reverse", "-", "--format", "dsl"], &stdout(&json));
    assert_eq!(back.stdout, a.stdout);
}
