//! End-to-end runs of the `cbpv` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const DIVERGENCE: &str =
    "(sapp (slam x bool strue) (sapp (srec f bool bool x (sapp f x)) sfalse))";
const CHOICE: &str = "(sapp (slam x bool (sif x x strue)) (sor strue sfalse))";

fn file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn cbpv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbpv")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn eval_runs_both_translations_of_the_divergence_example() {
    let src = file("divergence.src", DIVERGENCE);
    let path = src.to_str().unwrap();
    let cbv = cbpv(&["eval", "--source", "cbv", "--fuel", "2000", path]);
    assert!(cbv.status.success(), "{}", stderr(&cbv));
    assert_eq!(stdout(&cbv), "results {} (fuel exhausted)\nexhausted true\n");
    let cbn = cbpv(&["eval", "--source", "cbn", path]);
    assert_eq!(stdout(&cbn), "results {true}\nexhausted false\n");
}

#[test]
fn eval_collects_every_nondeterministic_result() {
    let src = file("choice.src", CHOICE);
    let out = cbpv(&["eval", "--source", "cbn", src.to_str().unwrap()]);
    assert_eq!(stdout(&out).lines().next(), Some("results {true, false}"));
}

#[test]
fn eval_reports_terminals_of_non_returners() {
    let m = file("lam.cbpv", "(lam y bool (return y))");
    let out = cbpv(&["eval", m.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "terminal (lam y bool (return y))\nexhausted false\n");
}

#[test]
fn eval_rejects_effects_outside_the_signature() {
    let src = file("choice-pure.src", CHOICE);
    let translated = cbpv(&["translate", "--strategy", "cbv", src.to_str().unwrap()]);
    let m = file("choice.cbpv", &stdout(&translated));
    let out = cbpv(&["eval", "--sig", "pure", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn translate_prints_the_term_and_its_type() {
    let src = file("true.src", "strue");
    let cbv = cbpv(&["translate", "--strategy", "cbv", src.to_str().unwrap()]);
    assert_eq!(stdout(&cbv), "(return true)\n");
    assert_eq!(stderr(&cbv), ": (F bool)\n");
    let ctx = file("ctx.src", "((x bool))");
    let var = file("var.src", "x");
    let cbn = cbpv(&["translate", "--strategy", "cbn", "--ctx", ctx.to_str().unwrap(), var.to_str().unwrap()]);
    assert_eq!(stdout(&cbn), "(force x)\n");
}

#[test]
fn denote_prints_a_table() {
    let src = file("denote.src", DIVERGENCE);
    let out = cbpv(&["denote", "--model", "lift", "--source", "cbv", src.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().ends_with("in lift(2)"), "{text}");
    assert_eq!(text.lines().nth(1), Some("() ↦ ⊥"));
}

#[test]
fn suite_succeeds_on_a_positive_model_and_emits_json_records() {
    let out = cbpv(&["suite", "--model", "identity", "--count", "10"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let records: Vec<serde_json::Value> =
        stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(records.iter().any(|r| r["name"] == "monad_laws[identity]" && r["verdict"] == "pass"));
    assert!(stderr(&out).lines().last().unwrap().starts_with("ok in"));
}

#[test]
fn writer_suite_fails_and_its_witness_reproduces() {
    let out = cbpv(&["suite", "--model", "writer", "--count", "1", "--types", "(-> bool bool)"]);
    assert_eq!(out.status.code(), Some(1));
    let line = stdout(&out)
        .lines()
        .find(|l| l.starts_with(r#"{"name":"galois[writer"#))
        .unwrap()
        .to_string();
    let witness = file("witness.json", &line);
    let again = cbpv(&["repro", "--witness", witness.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(1));
    assert!(stdout(&again).contains("φ∘ψ ⋢ id"));
}

#[test]
fn repro_accepts_a_bare_instance() {
    let witness = file(
        "instance.json",
        r#"{"kind":"corollary","expr":"(sapp (slam x bool strue) (sapp (srec f bool bool x (sapp f x)) sfalse))","ty":"bool","relation":"result_impl","fuel":1000}"#,
    );
    let out = cbpv(&["repro", "--witness", witness.to_str().unwrap()]);
    assert!(out.status.success(), "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).starts_with("corollary"));
}

#[test]
fn galois_maps_and_rhs_print_terms() {
    let m = file("ret.cbpv", "(return true)");
    let out = cbpv(&["galois-term", "--dir", "toname", "--type", "bool", m.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(!stdout(&out).trim().is_empty());
    let src = file("rhs.src", "strue");
    let rhs = cbpv(&["rhs", src.to_str().unwrap()]);
    assert!(rhs.status.success(), "{}", stderr(&rhs));
}

#[test]
fn missing_files_exit_with_usage_error() {
    let out = cbpv(&["eval", "/nonexistent/file"]);
    assert_eq!(out.status.code(), Some(2));
}
