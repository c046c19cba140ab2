use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn cylalg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylalg")).current_dir(dir).env_remove("CYLALG_OUT_DIR").args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn bigger_clique_wins_the_pebble_game() {
    let dir = tempfile::tempdir().unwrap();
    let out = cylalg(dir.path(), &["ef", "--left", "complete:4", "--right", "complete:3", "--pairs", "4", "--rounds", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("forall"));
}

#[test]
fn set_algebra_satisfies_every_axiom() {
    let dir = tempfile::tempdir().unwrap();
    let out = cylalg(dir.path(), &["algebra", "check", "--from", "set", "--base", "2", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("pass"));
    assert_eq!(text.lines().filter(|l| l.contains(" pass ")).count(), 7);
}

#[test]
fn corrupted_structure_fails_the_axiom_check() {
    let dir = tempfile::tempdir().unwrap();
    // Two atoms, dimension 2, with T_0 not reflexive.
    let bad = r#"{"dim": 2, "atoms": 2, "T": [[[0, 1], [1, 0]], [[0, 0], [1, 1]]], "D": {"0,1": [0]}}"#;
    std::fs::write(dir.path().join("bad.json"), bad).unwrap();
    let out = cylalg(dir.path(), &["--json", "algebra", "check", "--structure", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "fail");
    let failed: Vec<&Value> = v["result"]["results"].as_array().unwrap().iter().filter(|r| r["passed"] == false).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|r| !r["witness"].is_null()));
}

#[test]
fn rainbow_script_certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let build = cylalg(dir.path(), &["rainbow", "build", "--dim", "3", "--greens", "4", "--reds", "3", "--out", "out/ca43.json"]);
    assert_eq!(build.status.code(), Some(0), "{}", String::from_utf8_lossy(&build.stderr));
    let solve = cylalg(
        dir.path(),
        &[
            "game",
            "solve",
            "--structure",
            "out/ca43.json",
            "--kind",
            "F",
            "--nodes",
            "6",
            "--script",
            "rainbow",
            "--certificate-out",
            "out/cert.json",
        ],
    );
    assert_eq!(solve.status.code(), Some(0));
    assert_eq!(stdout(&solve).lines().next(), Some("forall"));
    let verify = cylalg(dir.path(), &["game", "verify", "--structure", "out/ca43.json", "--certificate", "out/cert.json"]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(stdout(&verify).lines().next(), Some("valid"));
}

#[test]
fn exhaustive_solver_certificate_replays_and_detects_the_wrong_structure() {
    let dir = tempfile::tempdir().unwrap();
    let solve = cylalg(
        dir.path(),
        &["game", "solve", "--from", "set", "--base", "2", "--dim", "2", "--nodes", "3", "--rounds", "omega", "--certificate-out", "c.json"],
    );
    assert_eq!(solve.status.code(), Some(0));
    assert_eq!(stdout(&solve).lines().next(), Some("exists"));
    let ok = cylalg(dir.path(), &["game", "verify", "--from", "set", "--base", "2", "--dim", "2", "--certificate", "c.json"]);
    assert_eq!(stdout(&ok).lines().next(), Some("valid"));
    let other = cylalg(dir.path(), &["game", "verify", "--from", "set", "--base", "3", "--dim", "2", "--certificate", "c.json"]);
    assert_eq!(other.status.code(), Some(1));
    assert_eq!(stdout(&other).lines().next(), Some("invalid"));
}

#[test]
fn structure_export_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let first =
        cylalg(dir.path(), &["export", "--kind", "structure", "--from", "rainbow", "--dim", "3", "--greens", "2", "--reds", "1", "--out", "a.json"]);
    assert_eq!(first.status.code(), Some(0));
    let again =
        cylalg(dir.path(), &["export", "--kind", "structure", "--from", "rainbow", "--dim", "3", "--greens", "2", "--reds", "1", "--out", "b.json"]);
    assert_eq!(again.status.code(), Some(0));
    let reimport = cylalg(dir.path(), &["export", "--kind", "structure", "--structure", "a.json", "--out", "c.json"]);
    assert_eq!(reimport.status.code(), Some(0));
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.json")).unwrap());
    assert_eq!(a, std::fs::read(dir.path().join("c.json")).unwrap());
}

#[test]
fn graph_dot_export_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["x.dot", "y.dot"] {
        let out = cylalg(dir.path(), &["export", "--kind", "graph", "--graph", "cycle:5", "--format", "dot", "--out", name]);
        assert_eq!(out.status.code(), Some(0));
    }
    let x = std::fs::read_to_string(dir.path().join("x.dot")).unwrap();
    assert_eq!(x, std::fs::read_to_string(dir.path().join("y.dot")).unwrap());
    assert!(x.contains("graph"));
}

#[test]
fn unsupported_export_pair_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let out = cylalg(
        dir.path(),
        &["--json", "export", "--kind", "structure", "--format", "dot", "--from", "set", "--base", "2", "--dim", "2", "--out", "s.dot"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "invalid-argument");
    assert!(!dir.path().join("s.dot").exists());
}

#[test]
fn bad_arguments_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cylalg(dir.path(), &["no-such-command"]).status.code(), Some(2));
    assert_eq!(cylalg(dir.path(), &["graph", "--spec", "wheel:3"]).status.code(), Some(2));
    assert_eq!(cylalg(dir.path(), &["game", "solve", "--nodes", "3"]).status.code(), Some(2));
}

#[test]
fn resource_limit_reports_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let out = cylalg(
        dir.path(),
        &["--json", "game", "solve", "--from", "rainbow", "--dim", "3", "--greens", "2", "--reds", "1", "--nodes", "5", "--max-states", "2"],
    );
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["verdict"], "unknown");
    assert_eq!(v["error"]["kind"], "resource-limit");
}

#[test]
fn envelope_carries_reproducibility_fields() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--json", "--seed", "7", "graph", "--spec", "complete:4"];
    let first = json(&cylalg(dir.path(), &args));
    let second = json(&cylalg(dir.path(), &args));
    assert_eq!(first, second);
    for key in ["schema", "version", "config_hash", "seed", "budgets", "verdict"] {
        assert!(!first[key].is_null(), "missing {key}");
    }
    assert_eq!(first["seed"], 7);
    assert_eq!(first["result"]["chromatic_number"], 4);
    let other = json(&cylalg(dir.path(), &["--json", "--seed", "8", "graph", "--spec", "complete:4"]));
    assert_ne!(first["config_hash"], other["config_hash"]);
}

#[test]
fn output_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cylalg"))
        .current_dir(dir.path())
        .env("CYLALG_OUT_DIR", dir.path().join("runs"))
        .args(["graph", "--spec", "cycle:4", "--out", "c4.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("runs/c4.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["nodes"], 4);
}

#[test]
fn monk_and_matrix_structures_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = cylalg(dir.path(), &["mat", "--graph", "complete:3", "--colours", "3", "--dim", "3", "--iso"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("isomorphic"));
}

#[test]
fn representation_game_on_the_full_cube() {
    let dir = tempfile::tempdir().unwrap();
    let out = cylalg(dir.path(), &["rep-game", "--from", "set", "--base", "2", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("representation"));
}

#[test]
fn guard_translation_agrees_on_random_instances() {
    let dir = tempfile::tempdir().unwrap();
    let out = cylalg(dir.path(), &["--seed", "3", "guard", "--random", "100", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("agree"));
}

#[test]
fn guard_on_a_single_instance() {
    let dir = tempfile::tempdir().unwrap();
    let model = r#"{"universe": 2, "relations": {"R": {"arity": 2, "tuples": [[0, 1]]}}, "admissible": [[0, 0], [0, 1]]}"#;
    std::fs::write(dir.path().join("m.json"), model).unwrap();
    let out = cylalg(dir.path(), &["guard", "--model", "m.json", "--formula", "(exists v1 (R v0 v1))", "--dim", "2", "--assignment", "0,0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("agree"));
    assert!(text.contains("generalized true classical true"));
}

#[test]
fn clique_eval_reads_a_model() {
    let dir = tempfile::tempdir().unwrap();
    // The unit relation leaves 0 and 2 apart, so no clique contains both.
    let model = r#"{"universe": 3, "relations": {
        "1": {"arity": 2, "tuples": [[0, 0], [0, 1], [1, 0], [1, 1], [1, 2], [2, 1], [2, 2]]},
        "E": {"arity": 2, "tuples": [[0, 1], [1, 0]]},
        "F": {"arity": 2, "tuples": [[0, 2]]}
    }}"#;
    std::fs::write(dir.path().join("m.json"), model).unwrap();
    let out = cylalg(dir.path(), &["clique-eval", "--model", "m.json", "--formula", "(exists v1 (E v0 v1))", "--assignment", "0,0", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).lines().next(), Some("true"));
    let out = cylalg(
        dir.path(),
        &["clique-eval", "--model", "m.json", "--formula", "(forall v1 (-> (E v0 v1) (= v1 v1)))", "--assignment", "2,1", "--n", "2"],
    );
    assert_eq!(stdout(&out).lines().next(), Some("true"));
    let out = cylalg(dir.path(), &["clique-eval", "--model", "m.json", "--formula", "(exists v1 (F v0 v1))", "--assignment", "0,0", "--n", "2"]);
    assert_eq!(stdout(&out).lines().next(), Some("false"));
}

#[test]
fn translation_is_loosely_guarded_and_agrees_with_the_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        cylalg(dir.path(), &["translate", "--equation", "(= (c 0 (c 1 x)) (c 1 (c 0 x)))", "--dim", "3", "--base", "2", "--squares", "0,1;1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("loosely guarded"));
    assert!(text.contains("0 mismatches"));
}
