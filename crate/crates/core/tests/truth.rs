use std::path::PathBuf;

use deacp_core::oracle::{check_truth, replay, TruthOptions, TruthVerdict, Violation, Witness};
use deacp_core::rg::{load_judgment, load_proof, Judgment, Mode};
use deacp_core::DataSpec;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn spec(name: &str) -> DataSpec {
    DataSpec::from_toml(&std::fs::read_to_string(data(&format!("specs/{name}.toml"))).unwrap()).unwrap()
}

fn judgment(spec: &DataSpec, name: &str) -> (Mode, Judgment) {
    let (m, j) = load_judgment(spec, &std::fs::read_to_string(data(&format!("judgments/{name}.ron"))).unwrap()).unwrap();
    (m.unwrap(), j)
}

fn truth(spec: &DataSpec, name: &str, max_len: usize) -> TruthVerdict {
    let (mode, j) = judgment(spec, name);
    check_truth(spec, &j, &TruthOptions::new(mode, max_len)).unwrap()
}

#[test]
fn increments_hold() {
    let spec = spec("default");
    assert!(truth(&spec, "sec6", 12).is_holds());
    assert!(truth(&spec, "sec6_rely", 12).is_holds());
}

#[test]
fn increments_do_not_always_reach_two() {
    let spec = spec("default");
    let TruthVerdict::Refuted(w) = truth(&spec, "sec6_post2", 12) else { panic!() };
    assert_eq!(w.violation, Violation::Post);
    replay(&spec, &w).unwrap();
    let back = Witness::from_json(&spec, &w.to_json()).unwrap();
    replay(&spec, &back).unwrap();
}

#[test]
fn guarded_assignment_never_stuck() {
    let spec = spec("nat3");
    assert!(truth(&spec, "sec8", 12).is_holds());
    let TruthVerdict::Refuted(w) = truth(&spec, "sec8_alone", 12) else { panic!() };
    assert_eq!(w.violation, Violation::Disabled);
    assert_eq!(w.computation.len(), 0);
    replay(&spec, &w).unwrap();
}

#[test]
fn omega_loop_converges() {
    let spec = spec("nat3");
    let v = truth(&spec, "sec7", 64);
    assert!(v.is_holds(), "{v}");
}

#[test]
fn spin_diverges() {
    let spec = spec("small");
    let TruthVerdict::Refuted(w) = truth(&spec, "spin", 8) else { panic!() };
    assert!(matches!(w.violation, Violation::Divergence { .. }));
    replay(&spec, &w).unwrap();
    let (_, j) = judgment(&spec, "spin");
    assert!(check_truth(&spec, &j, &TruthOptions::new(Mode::Partial, 8)).unwrap().is_holds());
}

#[test]
fn proof_roots_hold() {
    for (s, name) in [("default", "sec6"), ("default", "sec6_closed"), ("nat3", "sec8"), ("nat3", "sec7")] {
        let spec = spec(s);
        let text = std::fs::read_to_string(data(&format!("proofs/{name}.ron"))).unwrap();
        let (mode, d) = load_proof(&spec, &text).unwrap();
        let v = check_truth(&spec, &d.concl, &TruthOptions::new(mode.unwrap(), 64)).unwrap();
        assert!(v.is_holds(), "{name}: {v}");
    }
}
