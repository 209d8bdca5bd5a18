use std::path::PathBuf;

use deacp_core::rg::{load_proof, Checker, Mode, ObligationKind, Rule};
use deacp_core::{parse_cond, DataSpec, ParseCtx};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn spec(name: &str) -> DataSpec {
    DataSpec::from_toml(&std::fs::read_to_string(data(&format!("specs/{name}.toml"))).unwrap()).unwrap()
}

fn proof(spec: &DataSpec, name: &str) -> (Option<Mode>, deacp_core::rg::Derivation) {
    load_proof(spec, &std::fs::read_to_string(data(&format!("proofs/{name}.ron"))).unwrap()).unwrap()
}

#[test]
fn increments_proof_accepted() {
    let spec = spec("default");
    let (mode, d) = proof(&spec, "sec6");
    assert_eq!(mode, Some(Mode::Partial));
    assert_eq!(d.rule_count(), 6);
    let report = Checker::new(&spec, Mode::Partial).check(&d);
    assert!(report.accepted(), "{report}");
}

#[test]
fn increments_closed_proof_accepted() {
    let spec = spec("default");
    let (_, d) = proof(&spec, "sec6_closed");
    assert_eq!(d.rule_count(), 7);
    let report = Checker::new(&spec, Mode::Partial).check(&d);
    assert!(report.accepted(), "{report}");
}

#[test]
fn deadlock_proof_accepted() {
    let spec = spec("nat3");
    let (_, d) = proof(&spec, "sec8");
    let report = Checker::new(&spec, Mode::DeadlockFree).check(&d);
    assert!(report.accepted(), "{report}");
}

#[test]
fn omega_proof_accepted() {
    let spec = spec("nat3");
    let (_, d) = proof(&spec, "sec7");
    let checker = Checker::new(&spec, Mode::WeakTotal);
    let report = checker.check(&d);
    assert!(report.accepted(), "{report}");
    let ctx = ParseCtx::from_spec(&spec).with_ordinal_vars(["alpha"]);
    let phi = "(i = 0 => alpha = omega) and (not i = 0 => alpha = ord(j))";
    let want = parse_cond(&format!("({phi}) and alpha > 0 and i = 0"), &ctx).unwrap();
    let assigns: Vec<_> = d.nodes().into_iter().filter(|(_, n)| n.rule == Rule::Assignment).collect();
    assert_eq!(assigns.len(), 2);
    assert_eq!(assigns[0].1.concl.pre, want);
    let obls = checker.obligations(&d);
    assert!(obls.iter().any(|o| o.kind == ObligationKind::OrdinalStable));
}
