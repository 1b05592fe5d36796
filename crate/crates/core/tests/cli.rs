use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qmlogic::logic::{check_derivation, DeductiveSystem, Derivation};
use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn qmlogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmlogic"))
        .args(args)
        .env_remove("QF_CATALOG_DIR")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = qmlogic(args);
    let report = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), report)
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// The joint system of two CPL copies, written by `coproduct`.
fn joint(dir: &Path) -> PathBuf {
    let path = dir.join("joint.json");
    let cpl = data("cpl.json");
    let (code, _) = run(&["coproduct", "--systems", &cpl, &cpl, "-o", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    path
}

#[test]
fn verifies_the_bundled_two() {
    let (code, r) = run(&["verify", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["result"]["kind"], "quantale");
}

#[test]
fn broken_nucleus_fails_with_witness() {
    let (code, r) = run(&["verify", r#"{"module":"2/c3","table":[0,2,1]}"#]);
    assert_eq!(code, 1);
    assert_eq!(r["witness"]["structure"], "nucleus");
    assert!(r["witness"]["error"]["error"].is_string());
}

#[test]
fn malformed_input_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["verify", bad.to_str().unwrap()]).0, 3);
    assert_eq!(run(&["derive", "--system", "missing.json", "--goal", "x0"]).0, 3);
    assert_eq!(run(&["qm-pushout", "--instance", "99"]).0, 3);
    assert_eq!(run(&["derive", "--system", &data("cpl.json"), "--goal", "x0", "--depth", "0"]).0, 3);
}

#[test]
fn derives_the_identity_in_five_steps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("id.json");
    let cpl = data("cpl.json");
    let (code, r) = run(&["derive", "--system", &cpl, "--goal", "imp(x0,x0)", "--depth", "5", "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["steps"], 5);
    // the written proof is a plain derivation document too
    let d: Derivation = serde_json::from_value(read(&out)).unwrap();
    let s: DeductiveSystem = serde_json::from_str(&std::fs::read_to_string(&cpl).unwrap()).unwrap();
    check_derivation(&s, &[], &d).unwrap();
}

#[test]
fn factor_one_cannot_reach_the_second_identity() {
    let dir = tempfile::tempdir().unwrap();
    let joint = read(&joint(dir.path()));
    let mut only = joint.clone();
    only["axioms"] = Value::Array(joint["axioms"].as_array().unwrap()[..3].to_vec());
    only["rules"] = Value::Array(joint["rules"].as_array().unwrap()[..1].to_vec());
    let path = dir.path().join("factor-1.json");
    std::fs::write(&path, only.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let (code, r) = run(&["derive", "--system", p, "--goal", "imp#2(x0,x0)", "--depth", "6", "--budget-size", "9"]);
    assert_eq!(code, 2);
    assert_eq!(r["result"]["exhaustive"], true);
    assert_eq!(r["result"]["status"], "not_found_within_budget");
    let (code, r) = run(&["derive", "--system", p, "--goal", "imp#2(x0,x0)", "--depth", "6", "--budget-nodes", "5000"]);
    assert_eq!(code, 2);
    assert_eq!(r["result"]["exhaustive"], false);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["nucleus", "--system", &data("cpl.json"), "--from", "x0", "--universe-depth", "2", "--samples", "5", "--seed", "7"];
    let a = qmlogic(&args);
    let b = qmlogic(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["qm-coproduct", "--instance", "3"];
    assert_eq!(qmlogic(&args).stdout, qmlogic(&args).stdout);
}

#[test]
fn algebra_constructions_pass() {
    for args in [
        vec!["tensor".to_string(), "frame3/reg".into(), "frame3/c4".into()],
        vec!["product".into(), "2/c2".into(), "2/c3".into()],
        vec!["pushout".into(), data("span.json")],
        vec!["qm-coproduct".into(), data("qm-coproduct.json")],
        vec!["qm-pushout".into(), data("qm-pushout.json")],
        vec!["nucleus".into(), "luk3/reg/join-half".into()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, r) = run(&args);
        assert_eq!(code, 0, "{args:?}: {r}");
    }
}

#[test]
fn tensor_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let (code, r) = run(&["tensor", "2/c3", "2/c3", "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    // C3 ⊗ C3 over 2 is the lattice of down-sets of a 2×2 grid
    assert_eq!(r["result"]["size"], 6);
    assert_eq!(run(&["verify", out.to_str().unwrap()]).0, 0);
}

#[test]
fn pushout_amalgam_flag_is_checked() {
    let (code, r) = run(&["qm-pushout", "--instance", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["amalgam"], true);
}

#[test]
fn catalog_directory_adds_names() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("z3.json"), r#"{"elements":["e","g","h"],"op":[[0,1,2],[1,2,0],[2,0,1]],"unit":0}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qmlogic"))
        .args(["verify", "z3"])
        .env("QF_CATALOG_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["size"], 8);
}

#[test]
fn amalgam_and_proof_replay_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let amalgam = dir.path().join("amalgam.json");
    let to_imp = data("to-imp.json");
    let (code, r) = run(&[
        "amalgamate",
        "--left", &data("cpl.json"),
        "--right", &data("cpl.json"),
        "--fragment", &data("to-fragment.json"),
        "--r1", &to_imp,
        "--r2", &to_imp,
        "--gens", &data("gens.json"),
        "--suite", &data("fragment-suite.json"),
        "-o", amalgam.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{r}");
    let s: DeductiveSystem = serde_json::from_value(read(&amalgam)).unwrap();
    let names: Vec<_> = s.language().connectives().iter().map(|c| c.name.clone()).collect();
    assert_eq!(names, ["to", "imp#1", "not#1", "imp#2", "not#2"]);

    let proof = dir.path().join("id.json");
    run(&["derive", "--system", &data("cpl.json"), "--goal", "imp(x0,x0)", "-o", proof.to_str().unwrap()]);
    let joint = joint(dir.path());
    let map = r#"{"source":{"connectives":[{"name":"imp","arity":2},{"name":"not","arity":1}]},
        "target":{"connectives":[{"name":"imp#1","arity":2},{"name":"not#1","arity":1},{"name":"imp#2","arity":2},{"name":"not#2","arity":1}]},
        "terms":{"imp":"imp#2(x0,x1)","not":"not#2(x0)"}}"#;
    let out = dir.path().join("id2.json");
    let (code, r) = run(&["interpret-proof", "--proof", proof.to_str().unwrap(), "--target", joint.to_str().unwrap(), "--map", map, "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    let replayed = read(&out);
    assert_eq!(replayed["goal"], "imp#2(x0,x0)");
    let d: Derivation = serde_json::from_value(replayed.clone()).unwrap();
    let target: DeductiveSystem = serde_json::from_value(replayed["system"].clone()).unwrap();
    check_derivation(&target, &[], &d).unwrap();
}

#[test]
fn empty_fragment_is_refused_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let mut m = read(Path::new(&data("to-fragment.json")));
    m["axioms"] = Value::Array(vec![]);
    m["rules"] = Value::Array(vec![]);
    let frag = dir.path().join("empty.json");
    std::fs::write(&frag, m.to_string()).unwrap();
    let to_imp = data("to-imp.json");
    let (code, r) = run(&[
        "amalgamate",
        "--left", &data("cpl.json"),
        "--right", &data("cpl.json"),
        "--fragment", frag.to_str().unwrap(),
        "--r1", &to_imp,
        "--r2", &to_imp,
        "--gens", &data("gens.json"),
        "--suite", &data("fragment-suite.json"),
    ]);
    assert_eq!(code, 1);
    assert!(r["witness"]["NonConservativeWitness"].is_object(), "{r}");
}

#[test]
fn suite_runs_selected_criteria() {
    let (code, r) = run(&["suite", "--only", "8,11"]);
    assert_eq!(code, 0);
    assert_eq!(r["checks"].as_array().unwrap().len(), 2);
}
