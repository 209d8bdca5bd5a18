#![allow(dead_code)]

use std::path::PathBuf;

use deacp_core::rg::{load_judgment, load_proof, Derivation, Judgment, Mode, NodePath, Rule};
use deacp_core::{parse_cond, parse_proc, Cond, DataSpec, ParseCtx};

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

pub fn spec(name: &str) -> DataSpec {
    DataSpec::from_toml(&std::fs::read_to_string(data(&format!("specs/{name}.toml"))).unwrap()).unwrap()
}

pub fn proof(spec: &DataSpec, name: &str) -> (Mode, Derivation) {
    let (m, d) = load_proof(spec, &std::fs::read_to_string(data(&format!("proofs/{name}.ron"))).unwrap()).unwrap();
    (m.unwrap(), d)
}

pub fn judgment(spec: &DataSpec, name: &str) -> (Mode, Judgment) {
    let (m, j) = load_judgment(spec, &std::fs::read_to_string(data(&format!("judgments/{name}.ron"))).unwrap()).unwrap();
    (m.unwrap(), j)
}

pub fn cond(spec: &DataSpec, s: &str) -> Cond {
    parse_cond(s, &ParseCtx::from_spec(spec).with_ordinal_vars(["alpha"])).unwrap()
}

/// A proof from the golden corpus, or a mutated copy of one.
pub struct Case {
    pub name: String,
    pub spec: DataSpec,
    pub mode: Mode,
    pub derivation: Derivation,
}

pub fn golden() -> Vec<Case> {
    [("sec6", "default"), ("sec6_closed", "default"), ("sec8", "nat3"), ("sec7", "nat3")]
        .into_iter()
        .map(|(name, s)| {
            let spec = spec(s);
            let (mode, derivation) = proof(&spec, name);
            Case { name: name.to_string(), spec, mode, derivation }
        })
        .collect()
}

enum Edit {
    Rely(&'static str),
    Guar(&'static str),
    Pre(&'static str),
    Post(&'static str),
    Enab(&'static str),
    Proc(&'static str),
    EnabLeft(&'static str),
    Invariant(&'static str),
    Rule(Rule),
}

fn mutate(base: &str, s: &str, path: &[usize], edit: Edit) -> Case {
    let spec = spec(s);
    let (mode, mut d) = proof(&spec, base);
    let node = d.get_mut(&NodePath(path.to_vec())).expect("mutation path");
    let c = |t: &str| cond(&spec, t);
    let label = match edit {
        Edit::Rely(t) => {
            node.concl.rely = c(t);
            format!("rely := {t}")
        }
        Edit::Guar(t) => {
            node.concl.guar = c(t);
            format!("guar := {t}")
        }
        Edit::Pre(t) => {
            node.concl.pre = c(t);
            format!("pre := {t}")
        }
        Edit::Post(t) => {
            node.concl.post = c(t);
            format!("post := {t}")
        }
        Edit::Enab(t) => {
            node.concl.enab = Some(c(t));
            format!("enab := {t}")
        }
        Edit::Proc(t) => {
            node.concl.proc = parse_proc(t, &ParseCtx::from_spec(&spec)).unwrap();
            format!("proc := {t}")
        }
        Edit::EnabLeft(t) => {
            node.data.enab_left = Some(c(t));
            format!("enab_left := {t}")
        }
        Edit::Invariant(t) => {
            node.data.invariant = Some(c(t));
            format!("invariant := {t}")
        }
        Edit::Rule(r) => {
            node.rule = r;
            format!("rule := {}", r.name())
        }
    };
    let at = NodePath(path.to_vec());
    Case { name: format!("{base} @ {at}: {label}"), spec, mode, derivation: d }
}

/// Deliberately unsound edits of the golden proofs.
pub fn mutants() -> Vec<Case> {
    use Edit::*;
    vec![
        mutate("sec6", "default", &[], Post("i = 0 or i = 1")),
        mutate("sec6", "default", &[1], Guar("i = 0")),
        mutate("sec6", "default", &[0, 0], Post("i = 1")),
        mutate("sec6", "default", &[], Guar("i = i~ + 1")),
        mutate("sec6", "default", &[0, 1], Proc("i := i + 2")),
        mutate("sec6", "default", &[1, 0], Pre("i = 1")),
        mutate("sec6", "default", &[], Rely("true")),
        mutate("sec6_closed", "default", &[], Post("i = 2")),
        mutate("sec8", "nat3", &[], EnabLeft("true")),
        mutate("sec8", "nat3", &[0], Enab("true")),
        mutate("sec8", "nat3", &[1, 0], Post("i = 1")),
        mutate("sec8", "nat3", &[], Proc("((i > 0) :-> (i := 2)) || (i := 0)")),
        mutate("sec7", "nat3", &[0], Edit::Rule(deacp_core::rg::Rule::Iteration)),
        mutate("sec7", "nat3", &[0], Invariant("alpha = ord(j)")),
        mutate("sec7", "nat3", &[], Pre("true")),
    ]
}
