use std::process::{Command, Output};

use serde_json::Value as Json;

fn gossez(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gossez")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn machine(args: &[&str]) -> (i32, Json) {
    let mut all = args.to_vec();
    all.extend(["--format", "machine"]);
    let out = gossez(&all);
    let doc = serde_json::from_str(&stdout(&out)).expect("single JSON document");
    (out.status.code().unwrap(), doc)
}

#[test]
fn eval_reference_expressions() {
    let (code, doc) = machine(&["eval", "invcert(e, lim(1))"]);
    assert_eq!(code, 0);
    assert_eq!(doc["space"], "CertReport");
    assert_eq!(doc["value"]["beta"]["value"], "1/4");
    assert_eq!(doc["value"]["pairing"], "1");
    assert_eq!(doc["value"]["verdict"], "TypeDFails");

    let (_, doc) = machine(&["eval", "gap(fin{}, e)"]);
    assert_eq!(doc["value"]["sup"]["value"], "1/4");
    assert_eq!(doc["value"]["criterion_holds"], true);

    let out = gossez(&["eval", "Ainv(fin{2: 1})"]);
    assert_eq!(stdout(&out).trim(), "fin{1: -2, 2: 1}");
    let out = gossez(&["eval", "pair(delta(1), e)"]);
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn operation_subcommands() {
    let (code, doc) = machine(&["solve", "fin{2: 1}"]);
    assert_eq!(code, 0);
    assert_eq!(doc["value"], serde_json::json!({"1": "-2", "2": "1"}));

    let (_, doc) = machine(&["gap", "fin{1: 1}", "evc([], 1)"]);
    assert_eq!(doc["space"], "GapReport");

    let (_, doc) = machine(&["member", "A(fin{1: 1/2})", "fin{1: 1/2}"]);
    assert_eq!(doc["value"]["kind"], "member");
    let (_, doc) = machine(&["member", "A(fin{1: 1/2}) + 1/4 * e", "fin{1: 1/2}"]);
    assert_eq!(doc["value"]["kind"], "violation");
    assert!(doc["value"]["value"].as_str().unwrap().starts_with('-'));

    let (_, doc) = machine(&["invcert", "e", "limf(fin{}, 1/8)"]);
    assert_eq!(doc["value"]["verdict"], "TypeDHolds");
    assert_eq!(doc["value"]["pairing"], "1/8");
}

#[test]
fn input_errors_exit_two_with_codes() {
    let (code, doc) = machine(&["eval", "pair(e, e)"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "E-SPACE");

    let (code, doc) = machine(&["eval", "pair(delta(1),"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "E-SYNTAX");

    let (code, _) = machine(&["solve", "e"]);
    assert_eq!(code, 2);

    let out = gossez(&["verify-paper", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gossez(&["random-check", "--max-support", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gossez(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn random_check_is_deterministic() {
    let args = ["random-check", "--seed", "42", "--samples", "60", "--format", "machine"];
    let (a, b) = (gossez(&args), gossez(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc: Json = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["config"]["seed"], 42);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn random_check_default_scale_passes() {
    let out = gossez(&["random-check", "--seed", "42", "--samples", "500"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("type (D) criterion for T"));
}

#[test]
fn failing_run_dumps_counterexample() {
    let (code, doc) = machine(&["random-check", "--samples", "40", "--mutate", "a-drops-rank-one"]);
    assert_eq!(code, 1);
    let failed: Vec<&Json> = doc["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| !c["counterexample"].is_null()));
}
