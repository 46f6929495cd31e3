use std::path::PathBuf;

use ntype::cli::{run, Status};
use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    p.display().to_string()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["ntype".to_string()];
    argv.extend(args.iter().map(|a| a.to_string()));
    argv.push("--no-time".into());
    let out = run(argv);
    let v = serde_json::from_str(&out.rendered).unwrap_or(Value::Null);
    (out.code, v)
}

#[test]
fn ntype_check_exit_codes() {
    let z2 = corpus("nerve_z2.sset");
    let (code, r) = json(&["ntype-check", &z2, "--n", "1", "--max-dim", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], "ntype-report/1");
    assert_eq!(r["status"], "positive");
    let (code, r) = json(&["ntype-check", &z2, "--n", "0", "--max-dim", "3"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["witness"]["kind"], "sphere");
    assert_eq!(r["result"]["witness_rechecked"], true);
}

#[test]
fn pi0_reports_components() {
    let (code, r) = json(&["pi0", &corpus("two_points.sset"), "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["summary"], "2 components");
    let out = run(["ntype", "pi0", &corpus("two_points.sset"), "--format", "text", "--no-time"]);
    assert!(out.rendered.contains("2 components"));
}

#[test]
fn input_errors_and_usage() {
    assert_eq!(run(["ntype", "pi0", "/nonexistent.sset"]).code, 3);
    assert_eq!(run(["ntype", "frobnicate"]).code, 3);
    assert_eq!(run(["ntype", "cosk", &corpus("circle.sset")]).code, 3, "missing --n");
    let out = run(["ntype", "kan-check", &corpus("nerve_z2.sset"), "--max-dim", "40"]);
    assert_eq!(out.code, 2, "dimension budget");
    assert_eq!(Status::Unknown.exit_code(), 2);
}

#[test]
fn reports_are_deterministic() {
    let args = ["roundtrip", &corpus("nerve_z2.sset"), "--n", "1", "--site", &corpus("arrow.site")];
    let a = run(["ntype"].into_iter().chain(args).chain(["--no-time"]));
    let b = run(["ntype"].into_iter().chain(args).chain(["--no-time"]));
    assert_eq!(a.code, 0);
    assert_eq!(a.rendered, b.rendered);
    let r: Value = serde_json::from_str(&a.rendered).unwrap();
    assert_eq!(r["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn refutations_carry_witnesses() {
    let (code, r) = json(&["kan-check", &corpus("circle.sset")]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["witness"]["kind"], "horn");
    assert_eq!(r["result"]["witness_rechecked"], true);
    let (code, r) = json(&["rlp-check", &corpus("z2_to_point.smap"), "--n", "0"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["witness"]["generator"], "L_U(∂Δ2 → Δ2)");
    let (code, _) = json(&["nfib-check", &corpus("z2_to_point.smap"), "--n", "1", "--max-dim", "3"]);
    assert_eq!(code, 0);
}

#[test]
fn groupoid_commands() {
    let (code, r) = json(&["adjunction-check", &corpus("circle.sset"), "--groupoid", &corpus("z2.sgpd")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["report"]["functors"], 2);
    assert_eq!(json(&["shift-check", &corpus("z2.sgpd"), "--object", "*"]).0, 0);
    assert_eq!(json(&["shift-check", &corpus("loop_circle.sgpd"), "--object", "v"]).0, 0);
    assert_eq!(json(&["truncation-check", &corpus("z3.sgpd"), "--n", "0"]).0, 0);
    assert_eq!(json(&["unit-check", &corpus("boundary2.sset")]).0, 0);
    let (code, r) = json(&["wbar", &corpus("z2.sgpd"), "--max-dim", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["cell_counts"], serde_json::json!([1, 1, 1, 1]));
    let (_, r) = json(&["dnerve", &corpus("trivial.sgpd"), "--max-dim", "2"]);
    assert_eq!(r["result"]["cell_counts"], serde_json::json!([1]));
    let (_, r) = json(&["loopgpd", &corpus("circle.sset"), "--max-dim", "0", "--word-length", "1"]);
    assert_eq!(r["result"]["levels"][0]["arrows"], 3);
}

#[test]
fn construction_commands() {
    let (code, r) = json(&["cosk", &corpus("boundary2.sset"), "--n", "1", "--max-dim", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["cell_counts"], serde_json::json!([3, 3, 1]));
    let (_, r) = json(&["postnikov", &corpus("nerve_z2.sset"), "--n", "0", "--max-dim", "3"]);
    // cosk_1: every labelling of the three edges of Δ2 by {s0 *, g}, less the 3 degenerate ones
    assert_eq!(r["result"]["cell_counts"][2], 8 - 3);
    let (_, r) = json(&["ex", &corpus("interval.sset"), "--max-dim", "1"]);
    assert_eq!(r["result"]["cell_counts"][0], 2);
    let (_, r) = json(&["pi1", &corpus("circle.sset")]);
    assert_eq!(r["result"]["simplified"]["generators"].as_array().unwrap().len(), 1);
    let (code, r) = json(&["gen-sets", "--n", "0", "--site", &corpus("arrow.site")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["j_extension"].as_array().unwrap().len(), 6);
    let out = run(["ntype", "pi0", &corpus("point.sset"), "--out", "/dev/null"]);
    assert_eq!(out.out.unwrap().display().to_string(), "/dev/null");
}

#[test]
fn shipped_corpus_matches_the_corpus_module() {
    for e in ntype::corpus::objects(4) {
        let file = ntype::scomplex::load_sset(&PathBuf::from(corpus(&format!("{}.sset", e.name)))).unwrap();
        assert!(file.structurally_equal(&e.sset), "{}", e.name);
    }
}
