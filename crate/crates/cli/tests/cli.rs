use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel).display().to_string()
}

fn deacp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deacp")).args(args).output().expect("run deacp")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_accepts_golden_proofs() {
    let o = deacp(&["check", &data("proofs/sec6.ron")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let nat3 = data("specs/nat3.toml");
    for p in ["proofs/sec8.ron", "proofs/sec7.ron"] {
        let o = deacp(&["--dataspec", &nat3, "check", &data(p)]);
        assert_eq!(code(&o), 0, "{p}: {}", stdout(&o));
    }
}

#[test]
fn check_rejects_bad_weakening_with_counterexample() {
    let o = deacp(&["check", &data("proofs/mutants/sec6_bad_weakening.ron")]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("REJECTED at root.1"), "{out}");
    assert!(out.contains("counterexample"), "{out}");
}

#[test]
fn check_json_names_failing_node() {
    let o = deacp(&["--format", "json", "check", &data("proofs/mutants/sec6_post_narrowed.ron")]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "deacp-cli/1");
    assert_eq!(v["accepted"], false);
    assert!(v["rejection"]["path"].is_string());
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.ron");
    std::fs::write(&p, "(mode: \"partial\", root: (").unwrap();
    assert_eq!(code(&deacp(&["check", p.to_str().unwrap()])), 2);
    assert_eq!(code(&deacp(&["parse", "-e", "a . . b"])), 2);
}

#[test]
fn truth_verdicts_and_witness_replay() {
    assert_eq!(code(&deacp(&["truth", &data("judgments/sec6_rely.ron")])), 0);

    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let o = deacp(&["truth", &data("judgments/sec6_post2.ron"), "--witness", w.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("postcondition"));
    assert_eq!(code(&deacp(&["replay", w.to_str().unwrap()])), 0);

    let mut j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    j["steps"][0]["rho"] = j["steps"][1]["rho"].clone();
    std::fs::write(&w, j.to_string()).unwrap();
    assert_eq!(code(&deacp(&["replay", w.to_str().unwrap()])), 1);
}

#[test]
fn truth_in_deadlock_and_total_modes() {
    let nat3 = data("specs/nat3.toml");
    assert_eq!(code(&deacp(&["--dataspec", &nat3, "truth", &data("judgments/sec8.ron")])), 0);
    let o = deacp(&["--dataspec", &nat3, "truth", &data("judgments/sec8_alone.ron")]);
    assert_eq!(code(&o), 1);
    let o = deacp(&["--dataspec", &nat3, "--format", "json", "truth", &data("judgments/spin.ron")]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "refuted");
    assert_eq!(v["detail"]["witness"]["violation"]["kind"], "divergence");
}

#[test]
fn truth_inconclusive_under_tiny_bound() {
    let o = deacp(&["--max-states", "3", "truth", &data("judgments/sec6_rely.ron")]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
}

#[test]
fn normalize_and_bisim() {
    let o = deacp(&["normalize", "-e", "a . eps + (false :-> b)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "true :-> a . eps + delta");

    assert_eq!(code(&deacp(&["bisim", "-e", "a + a", "a"])), 0);
    assert_eq!(code(&deacp(&["bisim", "-e", "a . (b + c)", "a . b + a . c"])), 1);
}

#[test]
fn step_lists_transitions() {
    let o = deacp(&["--format", "json", "step", "-e", "a + (i := i + 1)", "--rho", "{i: 0, j: 0}"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 2);
    assert_eq!(v["terminal"], false);
}
