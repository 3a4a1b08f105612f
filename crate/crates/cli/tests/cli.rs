use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn modreedy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modreedy"))
        .args(args)
        .env_remove("MODREEDY_BUDGET_PROFILE")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reedy_exit_codes() {
    let ok = modreedy(&["check-reedy", path(&data("arrow_reedy.json"))]);
    assert_eq!(code(&ok), 0);
    assert_eq!(report(&ok)["passed"], true);

    let bad = modreedy(&["check-reedy", path(&data("bad_reedy.json"))]);
    assert_eq!(code(&bad), 1);
    let bad = report(&bad);
    let kinds: Vec<&str> = bad["violations"].as_array().unwrap().iter().map(|v| v["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"plus_not_raising"));

    assert_eq!(code(&modreedy(&["check-reedy", "simplex_op(2)"])), 0);
    assert_eq!(code(&modreedy(&["check-reedy", "no-such-shape"])), 2);
    assert_eq!(code(&modreedy(&["check-reedy"])), 2);
    assert_eq!(code(&modreedy(&["--budget", "huge", "check-reedy", "arrow"])), 2);
}

#[test]
fn malformed_documents_are_format_errors() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(code(&modreedy(&["classify", path(&junk), "--structure", "left"])), 2);

    // Components that are not natural.
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(data("arrow_map.json")).unwrap()).unwrap();
    doc["map"]["target"]["edges"]["0>1"]["images"] = serde_json::json!([1]);
    let unnatural = dir.path().join("unnatural.json");
    std::fs::write(&unnatural, doc.to_string()).unwrap();
    let out = modreedy(&["classify", path(&unnatural), "--structure", "left"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn acceptability_and_compatibility() {
    let acc = modreedy(&["check-acceptable", "simplex_op(2)", "--c0", "0,1", "--ambient", "ch:p=2", "--budget", "small"]);
    assert_eq!(code(&acc), 0);
    let r = report(&acc);
    assert_eq!((r["left"].clone(), r["right"].clone()), (Value::Bool(true), Value::Bool(true)));

    let compat = modreedy(&["check-compat", "grid(1,1)", "--assignment", path(&data("mixed_assignment.json")), "--side", "left", "--c0", "00"]);
    assert_eq!(code(&compat), 1);
    let v = &report(&compat)["violations"][0];
    assert_eq!(v["sub"], "00");
    assert!(v["witness"].is_object());
}

#[test]
fn classify_factor_lift() {
    let map = data("arrow_map.json");
    let cls = modreedy(&["classify", path(&map), "--structure", "left", "--c0", "0"]);
    assert_eq!(code(&cls), 0);
    assert_eq!(report(&cls)["cof"], true);

    let proj = modreedy(&["classify", path(&map), "--structure", "proj"]);
    assert_eq!(code(&proj), 0);

    for mode in ["cof-then-acyfib", "acycof-then-fib"] {
        for structure in ["left", "right"] {
            let out = modreedy(&["factor", path(&map), "--mode", mode, "--structure", structure, "--c0", "0"]);
            assert_eq!(code(&out), 0, "{mode} {structure}");
            let r = report(&out);
            assert_eq!(r["composite_equals_input"], true);
            assert_eq!(r["classes_verified"], true);
        }
    }

    let lift = modreedy(&["lift", path(&data("arrow_square.json"))]);
    assert_eq!(code(&lift), 0);
    assert!(report(&lift)["diagonal"]["components"].is_object());
}

#[test]
fn latching_and_matching_objects() {
    let d = data("square_diagram.json");
    let l = report(&modreedy(&["latching", path(&d), "--at", "11"]));
    assert_eq!(l["apex"], 1);
    assert_eq!(l["legs"].as_object().unwrap().len(), 3);
    let m = report(&modreedy(&["matching", path(&d), "--at", "00"]));
    assert_eq!(m["apex"], 1);
    assert_eq!(code(&modreedy(&["latching", path(&d), "--at", "22"])), 2);
}

#[test]
fn nerve_and_ambient_checks() {
    let nerve = modreedy(&["nerve-adjoint-check", "--ambient", "ch:p=2", "--n", "2", "--budget", "small"]);
    assert_eq!(code(&nerve), 0);
    assert_eq!(report(&nerve)["pairs"].as_array().unwrap().len(), 6);
    let amb = modreedy(&["verify-ambient", "--ambient", "triv-iso:finset", "--budget", "small"]);
    assert_eq!(code(&amb), 0);
    assert_eq!(code(&modreedy(&["verify-ambient", "--ambient", "ch:p=4"])), 2);
}

#[test]
fn tdot_build_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("evcof.json"), dir.path().join("nerve.json"));
    for (pipeline, out) in [("evcof", &a), ("nerve", &b)] {
        let built = modreedy(&["tdot", "build", "--pipeline", pipeline, "--N", "2", "--u", "deg0-ch-dim<=1", "--out", path(out)]);
        assert_eq!(code(&built), 0);
        assert_eq!(report(&built)["entries"]["2,2"], 6);
    }
    let same = modreedy(&["tdot", "compare", path(&a), path(&b)]);
    assert_eq!(code(&same), 0);
    assert_eq!(report(&same)["equal"], true);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    doc["entries"]["1,1"].as_array_mut().unwrap().pop();
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, doc.to_string()).unwrap();
    assert_eq!(code(&modreedy(&["tdot", "compare", path(&a), path(&tampered)])), 2);

    let zero = dir.path().join("zero.json");
    let built = modreedy(&["tdot", "build", "--pipeline", "evcof", "--N", "2", "--u", "zero-only", "--out", path(&zero)]);
    assert_eq!(code(&built), 0);
    let diff = modreedy(&["tdot", "compare", path(&a), path(&zero)]);
    assert_eq!(code(&diff), 1);
    assert!(!report(&diff)["witness"].is_null());
}

#[test]
fn budget_exhaustion_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let run = modreedy(&["--budget", "small", "tdot", "build", "--pipeline", "evcof", "--N", "2", "--u", "deg0-ch-dim<=2", "--out", path(&out)]);
    assert_eq!(code(&run), 3);
    assert!(String::from_utf8_lossy(&run.stderr).contains("budget exceeded"));
    assert!(!out.exists());
}

#[test]
fn suite_reports_are_deterministic() {
    let args = ["suite", "--criterion", "4", "--criterion", "7"];
    let (first, second) = (modreedy(&args), modreedy(&args));
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let r = report(&first);
    assert_eq!(r["criteria"].as_array().unwrap().len(), 2);
    let text = modreedy(&["suite", "--criterion", "4", "--format", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("criterion  4 PASS"));
    assert_eq!(code(&modreedy(&["suite", "--criterion", "10"])), 2);
}
