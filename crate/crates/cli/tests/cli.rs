use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ffkakeya"));
    c.env_remove("FFKAKEYA_SEED");
    c
}

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn bound_q5_is_1600_over_484() {
    let o = run(&["bound", "--q", "5", "--n", "2", "--ell", "2"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let (frac, rest) = text.trim().split_once(' ').unwrap();
    let (num, den) = frac.split_once('/').unwrap();
    let (num, den): (u64, u64) = (num.parse().unwrap(), den.parse().unwrap());
    assert_eq!(num * 484, den * 1600);
    assert_eq!(rest, "(ceil 4)");
}

#[test]
fn bound_rejects_ell_equal_to_q() {
    let o = run(&["bound", "--q", "3", "--n", "2", "--ell", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ell = 3"));
}

#[test]
fn bound_with_proof_params() {
    let o = run(&["bound", "--q", "19", "--n", "3", "--ell", "11", "--k", "19"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("D = 341, M = 206"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["replay", "--check", "nonsense"])), 2);
    assert_eq!(code(&run(&["replay", "--check", "warmup"])), 2);
    assert_eq!(code(&run(&["field", "--q", "6"])), 2);
}

#[test]
fn warmup_replay_passes_and_is_reproducible() {
    let args = ["replay", "--check", "warmup", "--q", "3", "--k", "3"];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    let cert = stdout_json(&a);
    assert_eq!(cert["verdict"], "pass");
    assert_eq!(cert["steps"][0]["D"], 5);
    assert_eq!(cert["steps"][1]["unknowns"], 21);
    assert_eq!(a.stdout, run(&args).stdout);
}

#[test]
fn seed_flag_and_environment() {
    let env = bin()
        .args(["replay", "--check", "key-lemma", "--q", "5", "--k", "2", "--trials", "20"])
        .env("FFKAKEYA_SEED", "77")
        .output()
        .unwrap();
    let flag = run(&["replay", "--check", "key-lemma", "--q", "5", "--k", "2", "--trials", "20", "--seed", "77"]);
    assert_eq!(stdout_json(&env)["seed"], 77);
    assert_eq!(env.stdout, flag.stdout);
}

#[test]
fn build_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.json");
    let inst = example("instance_q3.json");
    let o = run(&["build-set", "--instance", inst.to_str().unwrap(), "--out", set.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let o = run(&["verify-set", "--set", set.to_str().unwrap(), "--instance", inst.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["holds"], true);

    // drop one point and the check must fail
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&set).unwrap()).unwrap();
    doc["points"].as_array_mut().unwrap().pop();
    std::fs::write(&set, doc.to_string()).unwrap();
    let o = run(&["verify-set", "--set", set.to_str().unwrap(), "--instance", inst.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["missing"], serde_json::json!([2, 2]));
}

#[test]
fn malformed_json_reports_path_and_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("broken.json");
    std::fs::write(&bad, "{\n  \"field\": {\"p\": 3, \"m\": 1},\n  \"n\": 2,\n  oops\n}").unwrap();
    let o = run(&["build-set", "--instance", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("broken.json"), "{err}");
    assert!(err.contains("line 4"), "{err}");

    let missing = dir.path().join("absent.json");
    let o = run(&["build-set", "--instance", missing.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("absent.json"));
}

#[test]
fn vanish_emits_polynomial_or_none() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.json");
    let inst = example("instance_q3.json");
    run(&["build-set", "--instance", inst.to_str().unwrap(), "--out", set.to_str().unwrap()]);

    let o = run(&["vanish", "--set", set.to_str().unwrap(), "--degree", "5", "--mult", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o), "none");

    let o = run(&["vanish", "--set", set.to_str().unwrap(), "--degree", "2", "--mult", "1"]);
    assert_eq!(code(&o), 0);
    let doc = stdout_json(&o);
    // evaluate the returned polynomial at each point by hand
    let points: Value = serde_json::from_str(&std::fs::read_to_string(&set).unwrap()).unwrap();
    for pt in points["points"].as_array().unwrap() {
        let (x, y) = (pt[0].as_u64().unwrap(), pt[1].as_u64().unwrap());
        let mut sum = 0;
        for t in doc["terms"].as_array().unwrap() {
            let (e1, e2) = (t["exp"][0].as_u64().unwrap() as u32, t["exp"][1].as_u64().unwrap() as u32);
            sum += t["coeff"].as_u64().unwrap() * x.pow(e1) * y.pow(e2);
        }
        assert_eq!(sum % 3, 0, "nonzero at {pt}");
    }
    assert!(!doc["terms"].as_array().unwrap().is_empty());
}

#[test]
fn min_search_is_independent_of_jobs() {
    let g = example("g_q3.json");
    let one = run(&["min-search", "--q", "3", "--n", "2", "--ell", "2", "--g", g.to_str().unwrap()]);
    let four = run(&["min-search", "--q", "3", "--n", "2", "--ell", "2", "--g", g.to_str().unwrap(), "--jobs", "4"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let cert = stdout_json(&one);
    assert_eq!(cert["steps"][0]["min_size"], 4);

    let g5 = example("g_q5.json");
    let o = run(&["min-search", "--q", "5", "--n", "2", "--ell", "2", "--g", g5.to_str().unwrap(), "--mode", "greedy", "--restarts", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout_json(&o)["steps"][0]["min_size"].as_u64().unwrap() >= 4);
    // exhaustive at q = 5 is out of reach
    let o = run(&["min-search", "--q", "5", "--n", "2", "--ell", "2", "--g", g5.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    // g over the wrong field
    let o = run(&["min-search", "--q", "5", "--n", "2", "--ell", "2", "--g", g.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn derivs_zero_from_params_files() {
    let o = run(&["replay", "--check", "derivs-zero", "--params", example("derivs_q7.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["verdict"], "pass");
    let o = run(&["replay", "--check", "derivs-zero", "--params", example("derivs_q5.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("w = 1"));
}

#[test]
fn other_replays_pass() {
    let p = example("proposition_q5.json");
    for args in [
        vec!["replay", "--check", "proposition", "--params", p.to_str().unwrap()],
        vec!["replay", "--check", "proposition", "--q", "7", "--n", "3", "--k", "2", "--trials", "30"],
        vec!["replay", "--check", "key-lemma", "--q", "5", "--k", "2", "--trials", "50"],
        vec!["replay", "--check", "existence", "--trials", "20"],
        vec!["replay", "--check", "schwartz-zippel", "--trials", "20"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout_json(&o)["verdict"], "pass");
    }
}

#[test]
fn kakeya_and_field() {
    let o = run(&["kakeya", "--q", "3", "--n", "2", "--small"]);
    assert_eq!(code(&o), 0);
    assert!(stdout_json(&o)["points"].as_array().unwrap().len() < 9);
    let o = run(&["field", "--p", "3", "--m", "2", "--modulus", "1,0,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["elements"].as_array().unwrap().len(), 9);
    // x^2 + 2 x + 1 = (x + 1)^2 is reducible
    assert_eq!(code(&run(&["field", "--p", "3", "--m", "2", "--modulus", "1,2,1"])), 2);
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(!String::from_utf8_lossy(&o.stdout).contains("FAILED"));
}
