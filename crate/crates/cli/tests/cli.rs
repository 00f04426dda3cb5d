use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const EXAMPLE_GRAPH: &str = "5\n1 5\n5 2\n1 2\n2 4\n4 1\n4 3\n3 1\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strategizer"))
        .current_dir(dir)
        .args(args)
        .env_remove("STRATEGIZER_ETA")
        .env_remove("STRATEGIZER_T")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("mp.txt"), "1 -1\n-1 1\n").unwrap();
    fs::write(dir.path().join("zeros.json"), r#"{"rows":2,"cols":3,"data":[[0,0,0],[0,0,0]]}"#).unwrap();
    fs::write(dir.path().join("g2.txt"), "2 0\n0 1\n").unwrap();
    fs::write(dir.path().join("gs.txt"), "1 0\n0 1\n\n0 1\n1 0\n").unwrap();
    fs::write(dir.path().join("ex.txt"), EXAMPLE_GRAPH).unwrap();
    dir
}

#[test]
fn value_examples() {
    let dir = setup();
    let v = json(&run(dir.path(), &["value", "mp.txt"]));
    assert!(v["value"].as_f64().unwrap().abs() < 1e-12);
    let v = json(&run(dir.path(), &["value", "zeros.json"]));
    assert_eq!(v["value"].as_f64().unwrap(), 0.0);
    let v = json(&run(dir.path(), &["value", "g2.txt", "--out", "v.json"]));
    assert!((v["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);
    let written: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("v.json")).unwrap()).unwrap();
    assert_eq!(written, v);
}

#[test]
fn exit_codes() {
    let dir = setup();
    fs::write(dir.path().join("bad.txt"), "1 2\n3 x\n").unwrap();
    let out = run(dir.path(), &["value", "bad.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 3"));
    assert_eq!(run(dir.path(), &["value", "missing.txt"]).status.code(), Some(2));
    let out = run(dir.path(), &["plan", "gs.txt", "--eta", "1", "--T", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("simulate"));
    let out = run(dir.path(), &["brute", "ex.txt", "--cap", "1000"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("117649"));
}

#[test]
fn plan_report_layout() {
    let dir = setup();
    let v = json(&run(dir.path(), &["plan", "mp.txt", "--eta", "0.1", "--T", "100", "--eps", "1e-3"]));
    for key in ["value", "x_star", "r_star", "epsilon", "bounds", "k", "asymptotic_bound", "assumption1"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["k"], 2);
    assert_eq!(v["assumption1"]["holds"], true);
    let r = v["r_star"].as_f64().unwrap();
    let hi = v["bounds"][1].as_f64().unwrap();
    assert!((-2e-3..=hi + 2e-3).contains(&r));
}

#[test]
fn plan_reads_environment() {
    let dir = setup();
    let out = Command::new(env!("CARGO_BIN_EXE_strategizer"))
        .current_dir(dir.path())
        .args(["plan", "mp.txt"])
        .env("STRATEGIZER_ETA", "0.5")
        .env("STRATEGIZER_T", "10")
        .output()
        .unwrap();
    let v = json(&out);
    assert!((v["bounds"][1].as_f64().unwrap() - 2f64.ln() / 0.5).abs() < 1e-12);
    // The flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_strategizer"))
        .current_dir(dir.path())
        .args(["plan", "mp.txt", "--eta", "1"])
        .env("STRATEGIZER_ETA", "0.5")
        .env("STRATEGIZER_T", "10")
        .output()
        .unwrap();
    assert!((json(&out)["bounds"][1].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn simulate_alternating_matching_pennies() {
    let dir = setup();
    let v = json(&run(
        dir.path(),
        &["simulate", "mp.txt", "--learner", "mwu", "--schedule", "alternating", "--eta", "0.1", "--T", "1000"],
    ));
    let total = v["optimizer_total"].as_f64().unwrap();
    assert!((total - 500.0 * 0.1f64.tanh()).abs() <= 1e-9, "{total}");
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1001);
    assert_eq!(csv.lines().next().unwrap(), "t,opt_reward,learner_reward,opt_total,y_1,y_2");
    let traj: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("trajectory.json")).unwrap()).unwrap();
    assert_eq!(traj["trajectory"]["rounds"].as_array().unwrap().len(), 1000);
}

#[test]
fn simulate_empty_and_constant() {
    let dir = setup();
    json(&run(
        dir.path(),
        &["simulate", "mp.txt", "--learner", "mwu", "--schedule", "uniform", "--eta", "0.1", "--T", "0", "--stem", "empty"],
    ));
    assert_eq!(
        fs::read_to_string(dir.path().join("empty.csv")).unwrap(),
        "t,opt_reward,learner_reward,opt_total,y_1,y_2\n"
    );
    let v = json(&run(
        dir.path(),
        &["simulate", "mp.txt", "--learner", "mwu", "--schedule", "constant-xstar", "--eta", "0.1", "--T", "50"],
    ));
    assert!(v["optimizer_total"].as_f64().unwrap() >= -1e-9);
    let v = json(&run(
        dir.path(),
        &["simulate", "mp.txt", "--learner", "replicator", "--schedule", "pure:1", "--eta", "0.5", "--T", "2"],
    ));
    let cont = v["zero_sum"]["reward_cont"].as_f64().unwrap();
    assert!((v["optimizer_total"].as_f64().unwrap() - cont).abs() < 1e-12);
}

#[test]
fn simulate_schedule_file_and_mismatch() {
    let dir = setup();
    fs::write(
        dir.path().join("s.json"),
        r#"{"mode":"discrete","segments":[{"count":3,"strategy":[1,0]},{"count":2,"strategy":[0,1]}]}"#,
    )
    .unwrap();
    let v = json(&run(dir.path(), &["simulate", "mp.txt", "--learner", "br", "--schedule", "s.json", "--eta", "1"]));
    assert_eq!(v["rounds"], 5);
    let out = run(dir.path(), &["simulate", "mp.txt", "--learner", "br", "--schedule", "s.json", "--eta", "1", "--T", "4"]);
    assert_eq!(out.status.code(), Some(2));
    fs::write(dir.path().join("wide.json"), r#"{"mode":"discrete","segments":[{"count":1,"strategy":[1,0,0]}]}"#).unwrap();
    let out = run(dir.path(), &["simulate", "mp.txt", "--learner", "mwu", "--schedule", "wide.json", "--eta", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_verify_brute_round_trip() {
    let dir = setup();
    let v = json(&run(dir.path(), &["reduce", "ex.txt", "--normalize", "--out-dir", "out"]));
    assert_eq!(v["k"], 6);
    let inst: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/instance.json")).unwrap()).unwrap();
    assert_eq!(inst["b"]["data"][0][0].as_f64().unwrap(), -0.1);
    assert_eq!(inst["labels"]["columns"][5], "v_in_1");
    let norm: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/instance_normalized.json")).unwrap()).unwrap();
    assert_eq!(norm["b"]["data"][0][0].as_f64().unwrap(), 0.4875);

    fs::write(dir.path().join("cycle.txt"), "cycle 1 5 2 4 3\n").unwrap();
    let v = json(&run(dir.path(), &["verify", "ex.txt", "cycle.txt"]));
    assert_eq!(v["ok"], true);
    assert_eq!(v["sequence"], serde_json::json!([1, 2, 4, 6, 7, 1]));
    assert_eq!(v["reward"].as_f64().unwrap(), 6.0);

    fs::write(dir.path().join("short.txt"), "cycle 1 5 2 4\n").unwrap();
    let v = json(&run(dir.path(), &["verify", "ex.txt", "short.txt"]));
    assert_eq!(v["ok"], false);
    assert_eq!(v["reason"], "not spanning");

    let v = json(&run(dir.path(), &["brute", "out/instance.json", "--out", "w.json"]));
    assert_eq!(v["answer"], "YES");
    assert_eq!(v["max_reward"].as_f64().unwrap(), 6.0);
    let w: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("w.json")).unwrap()).unwrap();
    assert_eq!(w["cycle"], serde_json::json!([1, 5, 2, 4, 3]));
    // The exported witness is itself a valid claim.
    let v = json(&run(dir.path(), &["verify", "ex.txt", "w.json"]));
    assert_eq!(v["ok"], true);

    fs::write(dir.path().join("bad.json"), "{\"cycle\": [1, 2,").unwrap();
    assert_eq!(run(dir.path(), &["verify", "ex.txt", "bad.json"]).status.code(), Some(2));
}

#[test]
fn brute_without_cycle() {
    let dir = setup();
    fs::write(dir.path().join("cut.txt"), "5\n1 5\n1 2\n2 4\n4 1\n4 3\n3 1\n").unwrap();
    let v = json(&run(dir.path(), &["brute", "cut.txt"]));
    assert_eq!(v["answer"], "NO");
    assert!(v["max_reward"].as_f64().unwrap() <= 5.0);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = setup();
    let args = ["plan", "g2.txt", "--eta", "0.3", "--T", "20"];
    assert_eq!(run(dir.path(), &args).stdout, run(dir.path(), &args).stdout);
}

#[test]
fn battery_subset() {
    let dir = setup();
    let out = run(dir.path(), &["battery", "--seed", "3", "--only", "1,8,11", "--out", "b.json"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 3);
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(report.as_array().unwrap().len(), 3);
    assert_eq!(run(dir.path(), &["battery", "--only", "12"]).status.code(), Some(2));
}
