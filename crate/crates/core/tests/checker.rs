mod common;

use std::collections::BTreeSet;

use deacp_core::oracle::{check_truth, TruthOptions};
use deacp_core::rg::{CheckOptions, Checker, Derivation, Mode, NodePath, ObligationKind, ProofFile};
use deacp_core::Cond;

use common::{cond, proof, spec};

fn with_true_enab(d: &Derivation) -> Derivation {
    let mut d = d.clone();
    d.concl.enab = Some(Cond::tt());
    d.premises = d.premises.iter().map(with_true_enab).collect();
    d
}

#[test]
fn golden_proofs_accept_under_any_skip() {
    for c in common::golden() {
        let checker = Checker::new(&c.spec, c.mode);
        let kinds: BTreeSet<ObligationKind> = checker.obligations(&c.derivation).iter().map(|o| o.kind).collect();
        for k in kinds {
            let opts = CheckOptions { skip: BTreeSet::from([k]) };
            assert!(Checker::new(&c.spec, c.mode).with_options(opts).check(&c.derivation).accepted(), "{} skip {k:?}", c.name);
        }
    }
}

#[test]
fn skipping_post_stability_admits_a_false_judgment() {
    let spec = spec("nat3");
    let (mode, mut d) = proof(&spec, "sec8");
    let path = NodePath(vec![1, 0]);
    d.get_mut(&path).unwrap().concl.post = cond(&spec, "i = 1");
    let strict = Checker::new(&spec, mode).check(&d);
    assert!(!strict.accepted());
    assert_eq!(strict.rejection().unwrap().0, path);
    let lax = Checker::new(&spec, mode)
        .with_options(CheckOptions { skip: BTreeSet::from([ObligationKind::PostStable]) })
        .check(&d);
    assert!(lax.nodes.iter().find(|n| n.path == path).unwrap().accepted());
    let leaf = &d.get(&path).unwrap().concl;
    assert!(check_truth(&spec, leaf, &TruthOptions::new(mode, 16)).unwrap().is_refuted());
}

#[test]
fn skipping_weaken_post_admits_a_false_judgment() {
    let spec = spec("default");
    let (mode, mut d) = proof(&spec, "sec6_closed");
    d.concl.post = cond(&spec, "i = 2");
    assert!(!Checker::new(&spec, mode).check(&d).accepted());
    let lax = Checker::new(&spec, mode)
        .with_options(CheckOptions { skip: BTreeSet::from([ObligationKind::WeakenPost]) })
        .check(&d);
    assert!(lax.accepted(), "{lax}");
    assert!(check_truth(&spec, &d.concl, &TruthOptions::new(mode, 16)).unwrap().is_refuted());
}

#[test]
fn deadlock_acceptance_with_true_enab_implies_weak_total() {
    for name in ["sec6", "sec6_closed"] {
        let spec = spec("default");
        let (_, d) = proof(&spec, name);
        let df = with_true_enab(&d);
        let r = Checker::new(&spec, Mode::DeadlockFree).check(&df);
        assert!(r.accepted(), "{name}: {r}");
        assert!(Checker::new(&spec, Mode::WeakTotal).check(&df.erase_enab()).accepted(), "{name}");
    }
}

#[test]
fn proof_files_round_trip() {
    for c in common::golden() {
        let text = ProofFile::from_derivation(&c.derivation, Some(c.mode), &["alpha"]).to_ron();
        let (mode, back) = deacp_core::rg::load_proof(&c.spec, &text).unwrap();
        assert_eq!(mode, Some(c.mode));
        assert_eq!(back, c.derivation, "{}", c.name);
    }
}

#[test]
fn bad_weakening_file_rejected_with_counterexample() {
    let spec = spec("default");
    let text = std::fs::read_to_string(common::data("proofs/mutants/sec6_bad_weakening.ron")).unwrap();
    let (mode, d) = deacp_core::rg::load_proof(&spec, &text).unwrap();
    let report = Checker::new(&spec, mode.unwrap()).check(&d);
    let (path, reason) = report.rejection().unwrap();
    assert_eq!(path, NodePath(vec![1]));
    assert!(reason.contains("counterexample"), "{reason}");
}
