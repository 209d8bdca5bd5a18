mod common;

use deacp_core::oracle::{check_truth, TruthOptions, TruthVerdict};
use deacp_core::rg::Checker;

#[test]
fn mutants_rejected_or_true() {
    let cases = common::mutants();
    assert!(cases.len() >= 10);
    for c in cases {
        let report = Checker::new(&c.spec, c.mode).check(&c.derivation);
        let truth = check_truth(&c.spec, &c.derivation.concl, &TruthOptions::new(c.mode, 64)).unwrap();
        println!("{}: {} / {}", c.name, if report.accepted() { "accepted".to_string() } else { format!("{:?}", report.rejection()) }, truth.name());
        if report.accepted() {
            assert!(!matches!(truth, TruthVerdict::Refuted(_)), "{}", c.name);
        }
    }
}
