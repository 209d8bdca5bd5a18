mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use deacp_core::axioms::Axiom;
use deacp_core::bisim::{Bisim, Verdict};
use deacp_core::gen::Gen;
use deacp_core::oracle::{
    check_truth, conjoins, decompose, for_each_composition, for_each_computation, replay, EnvSteps, TruthOptions,
    TruthVerdict, Witness,
};
use deacp_core::rg::{Checker, Judgment, Mode, ObligationKind, Rule};
use deacp_core::semantics::{hnf, is_hnf, step, steps_from_hnf};
use deacp_core::{AtomicAction, Cond, DataSpec, Proc, Valuation};

use common::{cond, judgment, proof, spec};

const GOLDEN_TIME: Duration = Duration::from_secs(1);
const TRUTH_TIME: Duration = Duration::from_secs(30);
const TRUTH_MAX_LEN: usize = 12;
const AXIOM_INSTANCES: usize = 50;
const DERIVABLE_INSTANCES: usize = 20;
const AXIOM_DEPTH: usize = 4;
const FIRST_MAX_STATES: usize = 5_000;
const RERUN_MAX_STATES: usize = 50_000;
const UNKNOWN_RATE: f64 = 0.05;
const HNF_TERMS: usize = 200;
const STEP_SAMPLES: usize = 200;
const RG_DEPTH: usize = 4;
const MIN_MUTANTS: usize = 10;
const CONJOIN_PAIRS: usize = 50;
const CONJOIN_DEPTH: usize = 3;
const CONJOIN_LEN: usize = 6;
const HOARE_JUDGMENTS: usize = 30;
const SEED: u64 = 2024;

fn report(n: u32, title: &str, ok: bool, detail: &str) {
    println!("criterion {n:>2} {}: {title} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn axiom_spec() -> DataSpec {
    DataSpec::new(&["a", "b", "c"], &[("a", "b", "c")], &["i", "j"], 0, 2).unwrap()
}

fn bisim_twice(spec: &DataSpec, l: &deacp_core::Proc, r: &deacp_core::Proc) -> Verdict {
    match Bisim::new(spec).with_max_states(FIRST_MAX_STATES).check(l, r).unwrap() {
        Verdict::Unknown { .. } => Bisim::new(spec).with_max_states(RERUN_MAX_STATES).check(l, r).unwrap(),
        v => v,
    }
}

#[test]
fn c01_increments_proof() {
    let spec = spec("default");
    let t = Instant::now();
    let (mode, d) = proof(&spec, "sec6");
    let report_ = Checker::new(&spec, mode).check(&d);
    let elapsed = t.elapsed();
    let mut rules: Vec<Rule> = d.nodes().into_iter().map(|(_, n)| n.rule).collect();
    rules.sort();
    let mut want = vec![
        Rule::Assignment,
        Rule::Assignment,
        Rule::Sequential,
        Rule::Assignment,
        Rule::Parallel,
        Rule::Consequence,
    ];
    want.sort();
    let ok = mode == Mode::Partial && report_.accepted() && rules == want && elapsed < GOLDEN_TIME;
    report(1, "six-rule derivation accepted in partial mode", ok, &format!("{} rules, {elapsed:?}", d.rule_count()));
}

#[test]
fn c02_increments_truth() {
    let t = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for s in ["default", "nat3"] {
        let spec = spec(s);
        let (mode, j) = judgment(&spec, "sec6_rely");
        let opts = TruthOptions::new(mode, TRUTH_MAX_LEN);
        let holds = check_truth(&spec, &j, &opts).unwrap();
        let mut j2 = j.clone();
        j2.post = cond(&spec, "i = 2");
        let refuted = check_truth(&spec, &j2, &opts).unwrap();
        let replayed = match &refuted {
            TruthVerdict::Refuted(w) => {
                let back = Witness::from_json(&spec, &w.to_json()).unwrap();
                replay(&spec, w).is_ok() && replay(&spec, &back).is_ok()
            }
            _ => false,
        };
        ok &= holds.is_holds() && refuted.is_refuted() && replayed;
        details.push(format!("[{}, {}]: {} / post i=2 {}", spec.lo, spec.hi, holds.name(), refuted.name()));
    }
    let elapsed = t.elapsed();
    ok &= elapsed < TRUTH_TIME;
    report(2, "truth of the increments judgment", ok, &format!("{}, {elapsed:?}", details.join("; ")));
}

#[test]
fn c03_deadlock_freedom() {
    let spec = spec("nat3");
    let (mode, d) = proof(&spec, "sec8");
    let accepted = Checker::new(&spec, Mode::DeadlockFree).check(&d).accepted();
    let truth = check_truth(&spec, &d.concl, &TruthOptions::new(Mode::DeadlockFree, TRUTH_MAX_LEN)).unwrap();
    let ok = mode == Mode::DeadlockFree && accepted && truth.is_holds() && d.concl.enab == Some(Cond::tt());
    report(3, "deadlock-freedom derivation accepted and true", ok, &format!("accepted {accepted}, {}", truth.name()));
}

#[test]
fn c04_omega_iteration() {
    let spec = spec("nat3");
    let (mode, d) = proof(&spec, "sec7");
    let checker = Checker::new(&spec, Mode::WeakTotal);
    let accepted = checker.check(&d).accepted();
    let phi = "(i = 0 => alpha = omega) and (not i = 0 => alpha = ord(j))";
    let post = "exists alpha':ord . (((i = 0 => alpha' = omega) and (not i = 0 => alpha' = ord(j))) and alpha' < alpha)";
    let wanted = [
        (format!("({phi}) and alpha > 0 and i = 0"), "i := 1"),
        (format!("({phi}) and alpha > 0 and not i = 0"), "j := j - 1"),
    ];
    let obligations = checker.obligations(&d);
    let mut found = 0;
    for (pre, p) in &wanted {
        let pre = cond(&spec, pre);
        let post = cond(&spec, post);
        let hit = d.nodes().into_iter().find(|(_, n)| {
            n.rule == Rule::Assignment
                && n.concl.pre == pre
                && n.concl.proc.to_string() == *p
                && spec.equivalent(&n.concl.post, &post).unwrap()
        });
        if let Some((path, _)) = hit {
            if obligations.iter().any(|o| o.path == path && o.kind == ObligationKind::AssignPost) {
                found += 1;
            }
        }
    }
    let ok = mode == Mode::WeakTotal && accepted && found == 2;
    report(4, "omega iteration accepted in weak-total mode", ok, &format!("accepted {accepted}, {found}/2 assignment instances"));
}

fn equation_suite(axioms: &[Axiom], instances: usize) -> (bool, String) {
    let spec = axiom_spec();
    let mut g = Gen::new(&spec, SEED);
    let (mut total, mut unknown) = (0usize, 0usize);
    let mut failed: Vec<String> = Vec::new();
    for &ax in axioms {
        let mut no = 0;
        let mut first = None;
        for _ in 0..instances {
            let (l, r) = ax.instance(&spec, &mut g, AXIOM_DEPTH).unwrap();
            total += 1;
            match bisim_twice(&spec, &l, &r) {
                Verdict::Yes(_) => {}
                Verdict::No(e) => {
                    no += 1;
                    first.get_or_insert(format!("{l} vs {r}: {e}"));
                }
                Verdict::Unknown { .. } => unknown += 1,
            }
        }
        if no > 0 {
            println!("  {ax}: {no}/{instances} not bisimilar, e.g. {}", first.unwrap());
            failed.push(format!("{ax} {no}/{instances}"));
        }
    }
    let rate = unknown as f64 / total as f64;
    let ok = failed.is_empty() && rate < UNKNOWN_RATE;
    (ok, format!("{total} instances, unknown {rate:.3}, No: [{}]", failed.join(", ")))
}

#[test]
fn c05_axiom_soundness() {
    let axioms: Vec<Axiom> = Axiom::axioms().collect();
    let (ok, detail) = equation_suite(&axioms, AXIOM_INSTANCES);
    let spec = axiom_spec();
    let x = deacp_core::assign("i", deacp_core::DataTerm::Num(1));
    let y = deacp_core::act("a");
    let all = spec.actions.clone();
    let rhs = deacp_core::alt(
        deacp_core::alt(
            deacp_core::alt(deacp_core::left_merge(x.clone(), y.clone()), deacp_core::left_merge(y.clone(), x.clone())),
            deacp_core::comm_merge(x.clone(), y.clone()),
        ),
        deacp_core::seq(deacp_core::encap(all.clone(), x.clone()), deacp_core::encap(all, y.clone())),
    );
    println!("  CM1E at x = i := 1, y = a: {}", bisim_twice(&spec, &deacp_core::par(x, y), &rhs));
    report(5, "every axiom bisimilar on random closed instances", ok, &detail);
}

#[test]
fn c06_derivable_equations() {
    let axioms: Vec<Axiom> = Axiom::derivable().collect();
    let (ok, detail) = equation_suite(&axioms, DERIVABLE_INSTANCES);
    report(6, "derivable iteration equations bisimilar", ok, &detail);
}

#[test]
fn c07_head_normal_forms() {
    let spec = axiom_spec();
    let mut g = Gen::new(&spec, SEED + 7);
    let (mut not_hnf, mut no, mut unknown) = (0, 0, 0);
    for _ in 0..HNF_TERMS {
        let p = g.rg_proc(RG_DEPTH);
        let h = hnf(&spec, &p).unwrap().to_proc();
        if !is_hnf(&h) {
            not_hnf += 1;
        }
        match bisim_twice(&spec, &p, &h) {
            Verdict::Yes(_) => {}
            Verdict::No(e) => {
                println!("  {p} vs {h}: {e}");
                no += 1;
            }
            Verdict::Unknown { .. } => unknown += 1,
        }
    }
    let rate = unknown as f64 / HNF_TERMS as f64;
    let ok = not_hnf == 0 && no == 0 && rate < UNKNOWN_RATE;
    report(7, "hnf is a head normal form bisimilar to its input", ok, &format!("{HNF_TERMS} terms, not-hnf {not_hnf}, No {no}, unknown {rate:.3}"));
}

/// Same labels and successor valuations; successor terms agree up to bisimilarity
/// since the normal form rewrites residuals such as `eps . q` to `q`.
fn same_steps(spec: &DataSpec, a: &[(AtomicAction, Proc, Valuation)], b: &[(AtomicAction, Proc, Valuation)]) -> bool {
    let key = |s: &[(AtomicAction, Proc, Valuation)]| -> BTreeSet<(AtomicAction, Valuation)> {
        s.iter().map(|(l, _, r)| (l.clone(), r.clone())).collect()
    };
    let covered = |xs: &[(AtomicAction, Proc, Valuation)], ys: &[(AtomicAction, Proc, Valuation)]| {
        xs.iter().all(|(l, p, r)| {
            ys.iter().any(|(l2, q, r2)| l == l2 && r == r2 && (p == q || bisim_twice(spec, p, q).is_yes()))
        })
    };
    key(a) == key(b) && covered(a, b) && covered(b, a)
}

#[test]
fn c08_step_summand_agreement() {
    let spec = axiom_spec();
    let mut g = Gen::new(&spec, SEED + 8);
    let (mut mismatches, mut syntactic) = (0, 0);
    for _ in 0..STEP_SAMPLES {
        let p = g.rg_proc(RG_DEPTH);
        let rho = g.valuation();
        let sos = step(&spec, &p, &rho).unwrap();
        let from_hnf = steps_from_hnf(&spec, &p, &rho).unwrap();
        let a: BTreeSet<_> = sos.iter().cloned().collect();
        let b: BTreeSet<_> = from_hnf.iter().cloned().collect();
        if a == b {
            syntactic += 1;
        }
        if !same_steps(&spec, &sos, &from_hnf) {
            println!("  {p} at {rho}: sos {a:?} vs hnf {b:?}");
            mismatches += 1;
        }
    }
    report(
        8,
        "step relation equals hnf summands",
        mismatches == 0,
        &format!("{STEP_SAMPLES} samples, {mismatches} mismatches, {syntactic} syntactically identical"),
    );
}

#[test]
fn c09_checker_oracle_soundness() {
    let mut bad = Vec::new();
    let mut golden_ok = 0;
    let golden = common::golden();
    let n_golden = golden.len();
    for c in golden {
        let accepted = Checker::new(&c.spec, c.mode).check(&c.derivation).accepted();
        let truth = check_truth(&c.spec, &c.derivation.concl, &TruthOptions::new(c.mode, 64)).unwrap();
        if accepted && truth.is_refuted() {
            bad.push(c.name.clone());
        }
        if accepted && !truth.is_refuted() {
            golden_ok += 1;
        }
    }
    let mutants = common::mutants();
    let n_mutants = mutants.len();
    let mut rejected = 0;
    for c in mutants {
        let accepted = Checker::new(&c.spec, c.mode).check(&c.derivation).accepted();
        if !accepted {
            rejected += 1;
            continue;
        }
        let truth = check_truth(&c.spec, &c.derivation.concl, &TruthOptions::new(c.mode, 64)).unwrap();
        if !truth.is_holds() {
            bad.push(format!("{} ({})", c.name, truth.name()));
        }
    }
    let ok = bad.is_empty() && golden_ok == n_golden && n_mutants >= MIN_MUTANTS;
    report(
        9,
        "no accepted derivation has a refuted conclusion",
        ok,
        &format!("golden {golden_ok}/{n_golden}, mutants {rejected}/{n_mutants} rejected, violations [{}]", bad.join(", ")),
    );
}

#[test]
fn c10_conjoin() {
    let spec = DataSpec::new(&["a", "b", "c"], &[("a", "b", "c")], &["i"], 0, 1).unwrap();
    let mut g = Gen::new(&spec, SEED + 10).without_params();
    let (mut computations, mut compositions, mut failures) = (0usize, 0usize, 0usize);
    for _ in 0..CONJOIN_PAIRS {
        let p = g.rg_proc(CONJOIN_DEPTH);
        let q = g.rg_proc(CONJOIN_DEPTH);
        let pq = deacp_core::par(p.clone(), q.clone());
        for_each_computation(&spec, &pq, CONJOIN_LEN, &EnvSteps::All, &mut |sigma| {
            computations += 1;
            match decompose(&spec, sigma).unwrap() {
                Some((s1, s2)) if conjoins(&spec, sigma, &s1, &s2).unwrap() => {}
                _ => {
                    if failures < 3 {
                        println!("  no decomposition: {sigma}");
                    }
                    failures += 1;
                }
            }
            true
        })
        .unwrap();
        for_each_composition(&spec, &p, &q, CONJOIN_LEN, &mut |sigma, valid| {
            compositions += 1;
            if !valid {
                if failures < 3 {
                    println!("  composition is not a computation: {sigma}");
                }
                failures += 1;
            }
            true
        })
        .unwrap();
    }
    report(
        10,
        "computations of p || q are exactly the conjoined pairs",
        failures == 0,
        &format!("{CONJOIN_PAIRS} pairs, {computations} computations, {compositions} compositions, {failures} failures"),
    );
}

#[test]
fn c11_hoare_correspondence() {
    let spec = spec("small");
    let mut g = Gen::new(&spec, SEED + 11).without_params();
    let mut disagreements = 0;
    let mut verdicts = [0usize; 3];
    for _ in 0..HOARE_JUDGMENTS {
        let p = g.small_rg_proc(3);
        let j = Judgment::new(Cond::False, Cond::tt(), g.cond(2), p, g.cond(2));
        let opts = TruthOptions::new(Mode::Partial, 16);
        let with_env = check_truth(&spec, &j, &opts).unwrap();
        let without = check_truth(&spec, &j, &opts.clone().without_env()).unwrap();
        if with_env != without {
            disagreements += 1;
        }
        verdicts[match with_env {
            TruthVerdict::Holds(_) => 0,
            TruthVerdict::Refuted(_) => 1,
            TruthVerdict::Inconclusive(_) => 2,
        }] += 1;
    }
    report(
        11,
        "rely false truth equals truth without environment steps",
        disagreements == 0,
        &format!("{HOARE_JUDGMENTS} judgments (holds {}, refuted {}, inconclusive {}), {disagreements} disagreements", verdicts[0], verdicts[1], verdicts[2]),
    );
}
