//! Rely/guarantee derivations and their checker.
//!
//! A [`Derivation`] is an explicit proof tree. [`Checker::check`] matches every
//! node against its rule schema and discharges the semantic side conditions by
//! enumeration over the finite data domain.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{Counterexample, DataSpec, EvalError, Validity};
use crate::parse::{parse_cond, parse_proc, ParseCtx, ParseError};
use crate::terms::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Partial,
    #[serde(alias = "weak_total")]
    WeakTotal,
    #[serde(alias = "deadlock_free")]
    DeadlockFree,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Partial => "partial",
            Mode::WeakTotal => "weak-total",
            Mode::DeadlockFree => "deadlock-free",
        }
    }

    pub fn has_enab(self) -> bool {
        self == Mode::DeadlockFree
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = RgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "partial" => Ok(Mode::Partial),
            "weak-total" | "weak_total" => Ok(Mode::WeakTotal),
            "deadlock-free" | "deadlock_free" => Ok(Mode::DeadlockFree),
            other => Err(RgError::Malformed(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Inaction,
    Empty,
    #[serde(rename = "non-assignment-action", alias = "action")]
    Action,
    #[serde(rename = "assignment-action", alias = "assignment")]
    Assignment,
    Alternative,
    Sequential,
    Iteration,
    IterationOrdinal,
    #[serde(rename = "guarded-command", alias = "guarded")]
    Guarded,
    Parallel,
    Encapsulation,
    #[serde(rename = "auxiliary-variable", alias = "auxiliary")]
    Auxiliary,
    Consequence,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Inaction => "inaction",
            Rule::Empty => "empty",
            Rule::Action => "non-assignment-action",
            Rule::Assignment => "assignment-action",
            Rule::Alternative => "alternative",
            Rule::Sequential => "sequential",
            Rule::Iteration => "iteration",
            Rule::IterationOrdinal => "iteration-ordinal",
            Rule::Guarded => "guarded-command",
            Rule::Parallel => "parallel",
            Rule::Encapsulation => "encapsulation",
            Rule::Auxiliary => "auxiliary-variable",
            Rule::Consequence => "consequence",
        }
    }

    fn arity(self) -> usize {
        match self {
            Rule::Inaction | Rule::Empty | Rule::Action | Rule::Assignment => 0,
            Rule::Guarded | Rule::Encapsulation | Rule::Auxiliary | Rule::Consequence => 1,
            Rule::Alternative
            | Rule::Sequential
            | Rule::Iteration
            | Rule::IterationOrdinal
            | Rule::Parallel => 2,
        }
    }
}

impl FromStr for Rule {
    type Err = RgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let all = [
            Rule::Inaction,
            Rule::Empty,
            Rule::Action,
            Rule::Assignment,
            Rule::Alternative,
            Rule::Sequential,
            Rule::Iteration,
            Rule::IterationOrdinal,
            Rule::Guarded,
            Rule::Parallel,
            Rule::Encapsulation,
            Rule::Auxiliary,
            Rule::Consequence,
        ];
        let alias = match s {
            "action" => Some(Rule::Action),
            "assignment" => Some(Rule::Assignment),
            "guarded" => Some(Rule::Guarded),
            "auxiliary" => Some(Rule::Auxiliary),
            _ => None,
        };
        let key = s.replace('_', "-");
        alias
            .or_else(|| all.into_iter().find(|r| r.name() == key))
            .ok_or_else(|| RgError::Malformed(format!("unknown rule `{s}`")))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `<R, G> : {pre} proc {post}`, with enabledness `θ` in deadlock-free mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub rely: Cond,
    pub guar: Cond,
    pub pre: Cond,
    pub proc: Proc,
    pub post: Cond,
    pub enab: Option<Cond>,
}

impl Judgment {
    pub fn new(rely: Cond, guar: Cond, pre: Cond, proc: Proc, post: Cond) -> Self {
        Judgment { rely, guar, pre, proc, post, enab: None }
    }

    pub fn with_enab(mut self, enab: Cond) -> Self {
        self.enab = Some(enab);
        self
    }

    /// Problems that make the judgment ill-formed, independent of any rule.
    pub fn wellformed(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, c) in [("pre", &self.pre), ("post", &self.post)] {
            if c.has_prev() {
                out.push(format!("{name} condition must be one-state: {c}"));
            }
        }
        if let Some(t) = &self.enab {
            if t.has_prev() {
                out.push(format!("enabledness condition must be one-state: {t}"));
            }
        }
        if !self.proc.is_rg() {
            out.push(format!("process contains eval, left merge or communication merge: {}", self.proc));
        }
        out
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.enab {
            Some(t) => write!(f, "<{}, {}, {}> : ", self.rely, t, self.guar)?,
            None => write!(f, "<{}, {}> : ", self.rely, self.guar)?,
        }
        write!(f, "{{{}}} {} {{{}}}", self.pre, self.proc, self.post)
    }
}

/// Rule-specific extras.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleData {
    /// Intermediate condition of the sequential rule.
    pub chi: Option<Cond>,
    /// Auxiliary variable set `A`.
    pub aux: Option<BTreeSet<Var>>,
    /// `φ′`, `R′` and `θ′` of the auxiliary variable rule.
    pub pre_extra: Option<Cond>,
    pub rely_extra: Option<Cond>,
    pub enab_extra: Option<Cond>,
    /// `α` and `φ` of the ordinal iteration rule.
    pub ordinal_var: Option<Var>,
    pub invariant: Option<Cond>,
    /// `θ′` and `θ″` of the parallel rule.
    pub enab_left: Option<Cond>,
    pub enab_right: Option<Cond>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub concl: Judgment,
    pub data: RuleData,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: Rule, concl: Judgment) -> Self {
        Derivation { rule, concl, data: RuleData::default(), premises: Vec::new() }
    }

    pub fn node(rule: Rule, concl: Judgment, premises: Vec<Derivation>) -> Self {
        Derivation { rule, concl, data: RuleData::default(), premises }
    }

    pub fn with_data(mut self, data: RuleData) -> Self {
        self.data = data;
        self
    }

    /// Pre-order traversal with node paths.
    pub fn nodes(&self) -> Vec<(NodePath, &Derivation)> {
        let mut out = Vec::new();
        fn go<'a>(d: &'a Derivation, path: &mut Vec<usize>, out: &mut Vec<(NodePath, &'a Derivation)>) {
            out.push((NodePath(path.clone()), d));
            for (k, p) in d.premises.iter().enumerate() {
                path.push(k);
                go(p, path, out);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn get(&self, path: &NodePath) -> Option<&Derivation> {
        let mut d = self;
        for &k in &path.0 {
            d = d.premises.get(k)?;
        }
        Some(d)
    }

    pub fn get_mut(&mut self, path: &NodePath) -> Option<&mut Derivation> {
        let mut d = self;
        for &k in &path.0 {
            d = d.premises.get_mut(k)?;
        }
        Some(d)
    }

    pub fn rule_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::rule_count).sum::<usize>()
    }

    /// The same tree with every enabledness condition and its rule data removed.
    pub fn erase_enab(&self) -> Derivation {
        let mut d = self.clone();
        d.concl.enab = None;
        d.data.enab_extra = None;
        d.data.enab_left = None;
        d.data.enab_right = None;
        d.premises = d.premises.iter().map(Derivation::erase_enab).collect();
        d
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for k in &self.0 {
            write!(f, ".{k}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObligationKind {
    /// `φ⁻ ∧ R ⟹ φ`
    PreStable,
    /// `ψ⁻ ∧ R ⟹ ψ`
    PostStable,
    /// `φ ⟹ ψ[e/v]`
    AssignPost,
    Guarantee,
    /// `φ⁻ ∧ R ⟹ ∃α′(φ[α′/α] ∧ α′ ≤ α)`
    OrdinalStable,
    AuxPre,
    AuxRely,
    AuxEnab,
    StrengthenPre,
    StrengthenRely,
    StrengthenEnab,
    WeakenGuar,
    WeakenPost,
    /// `ψ″ ⟹ θ′`
    EnabLeft,
    /// `ψ′ ⟹ θ″`
    EnabRight,
    /// `θ′ ∨ θ″`
    EnabCover,
}

impl ObligationKind {
    pub const ALL: [ObligationKind; 16] = [
        ObligationKind::PreStable,
        ObligationKind::PostStable,
        ObligationKind::AssignPost,
        ObligationKind::Guarantee,
        ObligationKind::OrdinalStable,
        ObligationKind::AuxPre,
        ObligationKind::AuxRely,
        ObligationKind::AuxEnab,
        ObligationKind::StrengthenPre,
        ObligationKind::StrengthenRely,
        ObligationKind::StrengthenEnab,
        ObligationKind::WeakenGuar,
        ObligationKind::WeakenPost,
        ObligationKind::EnabLeft,
        ObligationKind::EnabRight,
        ObligationKind::EnabCover,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObligationKind::PreStable => "pre-stable",
            ObligationKind::PostStable => "post-stable",
            ObligationKind::AssignPost => "assign-post",
            ObligationKind::Guarantee => "guarantee",
            ObligationKind::OrdinalStable => "ordinal-stable",
            ObligationKind::AuxPre => "aux-pre",
            ObligationKind::AuxRely => "aux-rely",
            ObligationKind::AuxEnab => "aux-enab",
            ObligationKind::StrengthenPre => "strengthen-pre",
            ObligationKind::StrengthenRely => "strengthen-rely",
            ObligationKind::StrengthenEnab => "strengthen-enab",
            ObligationKind::WeakenGuar => "weaken-guar",
            ObligationKind::WeakenPost => "weaken-post",
            ObligationKind::EnabLeft => "enab-left",
            ObligationKind::EnabRight => "enab-right",
            ObligationKind::EnabCover => "enab-cover",
        }
    }
}

impl fmt::Display for ObligationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A semantic side condition `𝔇 ⊨ cond` generated by a node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub path: NodePath,
    pub rule: Rule,
    pub kind: ObligationKind,
    pub cond: Cond,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Discharge {
    Valid,
    Invalid(Counterexample),
    Skipped,
    Error(String),
}

impl Discharge {
    pub fn passes(&self) -> bool {
        matches!(self, Discharge::Valid | Discharge::Skipped)
    }
}

#[derive(Clone, Debug)]
pub struct NodeReport {
    pub path: NodePath,
    pub rule: Rule,
    pub judgment: String,
    /// Schema and side-condition mismatches.
    pub mismatches: Vec<String>,
    pub obligations: Vec<(Obligation, Discharge)>,
}

impl NodeReport {
    pub fn accepted(&self) -> bool {
        self.mismatches.is_empty() && self.obligations.iter().all(|(_, d)| d.passes())
    }

    /// First reason for rejection, if any.
    pub fn reason(&self) -> Option<String> {
        if let Some(m) = self.mismatches.first() {
            return Some(m.clone());
        }
        self.obligations.iter().find(|(_, d)| !d.passes()).map(|(o, d)| match d {
            Discharge::Invalid(cx) => format!("{} obligation fails: {} (counterexample {cx})", o.kind, o.cond),
            Discharge::Error(e) => format!("{} obligation cannot be evaluated: {e}", o.kind),
            _ => unreachable!(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub mode: Mode,
    pub nodes: Vec<NodeReport>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn accepted(&self) -> bool {
        self.nodes.iter().all(NodeReport::accepted)
    }

    pub fn rejection(&self) -> Option<(NodePath, String)> {
        self.nodes.iter().find_map(|n| n.reason().map(|r| (n.path.clone(), r)))
    }

    pub fn obligations(&self) -> impl Iterator<Item = &(Obligation, Discharge)> {
        self.nodes.iter().flat_map(|n| n.obligations.iter())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            let mark = if n.accepted() { "ok" } else { "FAIL" };
            writeln!(f, "{mark:4} {} {}: {}", n.path, n.rule, n.judgment)?;
            for m in &n.mismatches {
                writeln!(f, "       mismatch: {m}")?;
            }
            for (o, d) in &n.obligations {
                let verdict = match d {
                    Discharge::Valid => "valid".to_string(),
                    Discharge::Skipped => "skipped".to_string(),
                    Discharge::Invalid(cx) => format!("INVALID at {cx}"),
                    Discharge::Error(e) => format!("ERROR {e}"),
                };
                writeln!(f, "       {}: {} -- {verdict}", o.kind, o.cond)?;
            }
        }
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        match self.rejection() {
            None => write!(f, "ACCEPTED ({} mode)", self.mode),
            Some((p, r)) => write!(f, "REJECTED at {p}: {r}"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Obligation kinds that are recorded but not discharged.
    pub skip: BTreeSet<ObligationKind>,
}

#[derive(Debug, Error)]
pub enum RgError {
    #[error("proof file: {0}")]
    Ron(String),
    #[error("{field}: {source}")]
    Parse {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("malformed derivation: {0}")]
    Malformed(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn prev(c: &Cond) -> Cond {
    c.map_data(&DataTerm::prev_of)
}

fn stable(phi: &Cond, rely: &Cond) -> Cond {
    Cond::implies(Cond::and(prev(phi), rely.clone()), phi.clone())
}

fn zero() -> DataTerm {
    DataTerm::OrdLit(OrdValue::Fin(0))
}

pub const ENAB_INTERPRETATION: &str =
    "auxiliary rely/enabledness premises are discharged as the existential closure over current and previous copies of A";

pub struct Checker<'a> {
    spec: &'a DataSpec,
    mode: Mode,
    opts: CheckOptions,
}

struct NodeCx<'c> {
    mismatches: Vec<String>,
    obligations: Vec<(ObligationKind, Cond)>,
    spec: &'c DataSpec,
}

impl NodeCx<'_> {
    fn mismatch(&mut self, msg: String) {
        self.mismatches.push(msg);
    }

    fn obl(&mut self, kind: ObligationKind, cond: Cond) {
        self.obligations.push((kind, cond));
    }

    /// Syntactic identity or equivalence in the data algebra.
    fn same(&mut self, what: &str, expected: &Cond, actual: &Cond) {
        if expected == actual {
            return;
        }
        match self.spec.equivalent(expected, actual) {
            Ok(true) => {}
            Ok(false) => self.mismatch(format!("{what}: expected {expected}, found {actual}")),
            Err(e) => self.mismatch(format!("{what}: cannot compare {expected} with {actual}: {e}")),
        }
    }

    fn same_proc(&mut self, what: &str, expected: &Proc, actual: &Proc) {
        if expected != actual {
            self.mismatch(format!("{what}: expected process {expected}, found {actual}"));
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn premise(
        &mut self,
        k: usize,
        j: &Judgment,
        rely: &Cond,
        guar: &Cond,
        pre: &Cond,
        proc: &Proc,
        post: &Cond,
        enab: Option<&Cond>,
    ) {
        self.same(&format!("premise {k} rely"), rely, &j.rely);
        self.same(&format!("premise {k} guarantee"), guar, &j.guar);
        self.same(&format!("premise {k} pre"), pre, &j.pre);
        self.same_proc(&format!("premise {k}"), proc, &j.proc);
        self.same(&format!("premise {k} post"), post, &j.post);
        if let (Some(expected), Some(actual)) = (enab, &j.enab) {
            self.same(&format!("premise {k} enabledness"), expected, actual);
        }
    }
}

impl<'a> Checker<'a> {
    pub fn new(spec: &'a DataSpec, mode: Mode) -> Self {
        Checker { spec, mode, opts: CheckOptions::default() }
    }

    pub fn with_options(mut self, opts: CheckOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Matches every node against its schema and discharges all obligations.
    pub fn check(&self, d: &Derivation) -> Report {
        let mut nodes = Vec::new();
        let mut uses_aux = false;
        for (path, node) in d.nodes() {
            uses_aux |= node.rule == Rule::Auxiliary;
            let cx = self.node(node);
            let obligations = cx
                .obligations
                .into_iter()
                .map(|(kind, cond)| {
                    let discharge = if self.opts.skip.contains(&kind) {
                        Discharge::Skipped
                    } else {
                        match self.spec.valid(&cond) {
                            Ok(Validity::Valid) => Discharge::Valid,
                            Ok(Validity::Invalid(cx)) => Discharge::Invalid(cx),
                            Err(e) => Discharge::Error(e.to_string()),
                        }
                    };
                    (Obligation { path: path.clone(), rule: node.rule, kind, cond }, discharge)
                })
                .collect();
            nodes.push(NodeReport {
                path,
                rule: node.rule,
                judgment: node.concl.to_string(),
                mismatches: cx.mismatches,
                obligations,
            });
        }
        let mut notes = vec![format!(
            "data domain [{}, {}], overflow {}",
            self.spec.lo, self.spec.hi, self.spec.overflow
        )];
        if uses_aux {
            notes.push(ENAB_INTERPRETATION.to_string());
        }
        Report { mode: self.mode, nodes, notes }
    }

    /// The semantic side conditions of every node, in pre-order.
    pub fn obligations(&self, d: &Derivation) -> Vec<Obligation> {
        d.nodes()
            .into_iter()
            .flat_map(|(path, node)| {
                self.node(node).obligations.into_iter().map(move |(kind, cond)| Obligation {
                    path: path.clone(),
                    rule: node.rule,
                    kind,
                    cond,
                })
            })
            .collect()
    }

    /// Which pre- and postconditions are stable under the node's rely condition.
    pub fn preservation_scan(&self, d: &Derivation) -> Vec<(NodePath, bool, bool)> {
        let holds = |c: &Cond| matches!(self.spec.valid(c), Ok(Validity::Valid));
        d.nodes()
            .into_iter()
            .map(|(path, n)| {
                let j = &n.concl;
                (path, holds(&stable(&j.pre, &j.rely)), holds(&stable(&j.post, &j.rely)))
            })
            .collect()
    }

    fn node(&self, d: &Derivation) -> NodeCx<'a> {
        let mut cx = NodeCx { mismatches: Vec::new(), obligations: Vec::new(), spec: self.spec };
        for problem in d.concl.wellformed() {
            cx.mismatch(problem);
        }
        for (k, p) in d.premises.iter().enumerate() {
            for problem in p.concl.wellformed() {
                cx.mismatch(format!("premise {k}: {problem}"));
            }
        }
        let judgments = std::iter::once(&d.concl).chain(d.premises.iter().map(|p| &p.concl));
        for j in judgments {
            match (self.mode.has_enab(), &j.enab) {
                (true, None) => cx.mismatch(format!("missing enabledness condition in {} mode", self.mode)),
                (false, Some(_)) => cx.mismatch(format!("enabledness condition is not allowed in {} mode", self.mode)),
                _ => {}
            }
        }
        if d.premises.len() != d.rule.arity() {
            cx.mismatch(format!(
                "{} takes {} premise(s), found {}",
                d.rule,
                d.rule.arity(),
                d.premises.len()
            ));
            return cx;
        }
        if !cx.mismatches.is_empty() {
            return cx;
        }
        self.rule(d, &mut cx);
        cx
    }

    fn rule(&self, d: &Derivation, cx: &mut NodeCx<'_>) {
        let j = &d.concl;
        let (r, g, phi, psi) = (&j.rely, &j.guar, &j.pre, &j.post);
        let theta = j.enab.as_ref();
        let prem: Vec<&Judgment> = d.premises.iter().map(|p| &p.concl).collect();
        let enab_of = |k: usize| prem[k].enab.clone();
        match d.rule {
            Rule::Inaction => {
                if *j.proc != ProcTerm::Dead {
                    cx.mismatch(format!("inaction needs delta, found {}", j.proc));
                }
                if let Some(t) = theta {
                    cx.same("enabledness", &Cond::False, t);
                }
            }
            Rule::Empty => {
                if *j.proc != ProcTerm::Empty {
                    cx.mismatch(format!("empty process rule needs eps, found {}", j.proc));
                }
                cx.same("post", phi, psi);
                cx.obl(ObligationKind::PreStable, stable(phi, r));
            }
            Rule::Action => {
                match &*j.proc {
                    ProcTerm::Atom(a) if !a.is_assignment() => {}
                    other => cx.mismatch(format!("non-assignment action rule needs an action, found {other}")),
                }
                cx.same("post", phi, psi);
                cx.obl(ObligationKind::PreStable, stable(phi, r));
                let frame = unch(&fvar([phi, g]));
                cx.obl(ObligationKind::Guarantee, Cond::implies(Cond::and(prev(phi), frame), g.clone()));
            }
            Rule::Assignment => {
                let ProcTerm::Atom(AtomicAction::Assign(v, e)) = &*j.proc else {
                    cx.mismatch(format!("assignment action rule needs an assignment, found {}", j.proc));
                    return;
                };
                cx.obl(ObligationKind::AssignPost, Cond::implies(phi.clone(), psi.subst_flex(v, e)));
                cx.obl(ObligationKind::PreStable, stable(phi, r));
                cx.obl(ObligationKind::PostStable, stable(psi, r));
                let mut framed = fvar([phi, g]);
                framed.remove(v);
                let moved = Cond::or(
                    Cond::eq(DataTerm::Flex(v.clone()), e.prev_of()),
                    Cond::eq(DataTerm::Flex(v.clone()), DataTerm::Prev(v.clone())),
                );
                cx.obl(
                    ObligationKind::Guarantee,
                    Cond::implies(Cond::and_all([prev(phi), moved, unch(&framed)]), g.clone()),
                );
            }
            Rule::Alternative => {
                let ProcTerm::Alt(p, q) = &*j.proc else {
                    cx.mismatch(format!("alternative rule needs p + q, found {}", j.proc));
                    return;
                };
                cx.premise(0, prem[0], r, g, phi, p, psi, None);
                cx.premise(1, prem[1], r, g, phi, q, psi, None);
                if let (Some(t), Some(t1), Some(t2)) = (theta, enab_of(0), enab_of(1)) {
                    cx.same("enabledness", &Cond::or(t1, t2), t);
                }
            }
            Rule::Sequential => {
                let ProcTerm::Seq(p, q) = &*j.proc else {
                    cx.mismatch(format!("sequential rule needs p . q, found {}", j.proc));
                    return;
                };
                let chi = prem[0].post.clone();
                if let Some(c) = &d.data.chi {
                    cx.same("intermediate condition", c, &chi);
                }
                cx.premise(0, prem[0], r, g, phi, p, &chi, theta);
                cx.premise(1, prem[1], r, g, &chi, q, psi, theta);
            }
            Rule::Iteration => {
                if self.mode != Mode::Partial {
                    cx.mismatch(format!(
                        "plain iteration rule is not available in {} mode; use iteration-ordinal",
                        self.mode
                    ));
                    return;
                }
                self.plain_iteration(j, &prem, cx);
            }
            Rule::IterationOrdinal => {
                if self.mode == Mode::Partial {
                    self.plain_iteration(j, &prem, cx);
                } else {
                    self.ordinal_iteration(d, &prem, cx);
                }
            }
            Rule::Guarded => {
                let ProcTerm::Guard(chi, p) = &*j.proc else {
                    cx.mismatch(format!("guarded command rule needs chi :-> p, found {}", j.proc));
                    return;
                };
                let guarded_pre = Cond::and(phi.clone(), chi.clone());
                cx.premise(0, prem[0], r, g, &guarded_pre, p, psi, Some(&Cond::tt()));
                if let Some(t) = theta {
                    cx.same("enabledness", &Cond::implies(phi.clone(), chi.clone()), t);
                }
                cx.obl(ObligationKind::PreStable, stable(phi, r));
            }
            Rule::Parallel => self.parallel(d, &prem, cx),
            Rule::Encapsulation => {
                let ProcTerm::Encap(h, p) = &*j.proc else {
                    cx.mismatch(format!("encapsulation rule needs encap(H, p), found {}", j.proc));
                    return;
                };
                cx.premise(0, prem[0], r, g, phi, p, psi, theta);
                if self.mode.has_enab() {
                    let clash: Vec<String> =
                        p.action_names().intersection(h).map(|a| a.to_string()).collect();
                    if !clash.is_empty() {
                        cx.mismatch(format!(
                            "side condition: actions {{{}}} of the process are encapsulated",
                            clash.join(", ")
                        ));
                    }
                }
            }
            Rule::Auxiliary => self.auxiliary(d, &prem, cx),
            Rule::Consequence => {
                let p0 = prem[0];
                cx.same_proc("premise 0", &j.proc, &p0.proc);
                cx.obl(ObligationKind::StrengthenPre, Cond::implies(phi.clone(), p0.pre.clone()));
                cx.obl(ObligationKind::StrengthenRely, Cond::implies(r.clone(), p0.rely.clone()));
                if let (Some(t), Some(t0)) = (theta, &p0.enab) {
                    cx.obl(ObligationKind::StrengthenEnab, Cond::implies(t.clone(), t0.clone()));
                }
                cx.obl(ObligationKind::WeakenGuar, Cond::implies(p0.guar.clone(), g.clone()));
                cx.obl(ObligationKind::WeakenPost, Cond::implies(p0.post.clone(), psi.clone()));
            }
        }
    }

    fn plain_iteration(&self, j: &Judgment, prem: &[&Judgment], cx: &mut NodeCx<'_>) {
        let ProcTerm::Iter(p, q) = &*j.proc else {
            cx.mismatch(format!("iteration rule needs p * q, found {}", j.proc));
            return;
        };
        let (r, g, phi, psi) = (&j.rely, &j.guar, &j.pre, &j.post);
        cx.premise(0, prem[0], r, g, phi, p, phi, None);
        cx.premise(1, prem[1], r, g, phi, q, psi, None);
    }

    fn ordinal_iteration(&self, d: &Derivation, prem: &[&Judgment], cx: &mut NodeCx<'_>) {
        let j = &d.concl;
        let ProcTerm::Iter(p, q) = &*j.proc else {
            cx.mismatch(format!("iteration rule needs p * q, found {}", j.proc));
            return;
        };
        let (Some(alpha), Some(phi)) = (&d.data.ordinal_var, &d.data.invariant) else {
            cx.mismatch("ordinal iteration rule needs ordinal_var and invariant".to_string());
            return;
        };
        if !phi.free_bound_vars().contains(&(alpha.clone(), Sort::Ord)) {
            cx.mismatch(format!("ordinal variable {alpha} does not occur free in {phi}"));
            return;
        }
        let (r, g, psi) = (&j.rely, &j.guar, &j.post);
        let a = DataTerm::Bound(alpha.clone(), Sort::Ord);
        let mut avoid = phi.bound_names();
        avoid.insert(alpha.clone());
        let alpha2 = fresh_name(alpha, &avoid);
        let a2 = DataTerm::Bound(alpha2.clone(), Sort::Ord);
        let shifted = phi.subst_bound(alpha, &a2);
        cx.same("pre", &Cond::exists(alpha2.clone(), Sort::Ord, shifted.clone()), &j.pre);
        let body_pre = Cond::and(phi.clone(), Cond::lt(zero(), a.clone()));
        let body_post = Cond::exists(alpha2.clone(), Sort::Ord, Cond::and(shifted.clone(), Cond::lt(a2.clone(), a.clone())));
        cx.premise(0, prem[0], r, g, &body_pre, p, &body_post, None);
        cx.premise(1, prem[1], r, g, &phi.subst_bound(alpha, &zero()), q, psi, None);
        if let (Some(t), Some(t1), Some(t2)) = (&j.enab, &prem[0].enab, &prem[1].enab) {
            cx.same("enabledness", &Cond::or(t1.clone(), t2.clone()), t);
        }
        cx.obl(
            ObligationKind::OrdinalStable,
            Cond::implies(
                Cond::and(prev(phi), r.clone()),
                Cond::exists(alpha2, Sort::Ord, Cond::and(shifted, Cond::le(a2, a))),
            ),
        );
    }

    fn parallel(&self, d: &Derivation, prem: &[&Judgment], cx: &mut NodeCx<'_>) {
        let j = &d.concl;
        let ProcTerm::Par(p, q) = &*j.proc else {
            cx.mismatch(format!("parallel rule needs p || q, found {}", j.proc));
            return;
        };
        let (r, phi) = (&j.rely, &j.pre);
        let (g1, g2) = (&prem[0].guar, &prem[1].guar);
        let (psi1, psi2) = (&prem[0].post, &prem[1].post);
        let mut enabs = (None, None);
        if let Some(theta) = &j.enab {
            let split = |k: usize, given: &Option<Cond>| -> Option<Cond> {
                given.clone().or_else(|| {
                    prem[k].enab.as_ref().map(|e| match e.as_and() {
                        Some((x, y)) if x == theta => y.clone(),
                        _ => e.clone(),
                    })
                })
            };
            match (split(0, &d.data.enab_left), split(1, &d.data.enab_right)) {
                (Some(t1), Some(t2)) => enabs = (Some(t1), Some(t2)),
                _ => {
                    cx.mismatch("cannot determine the component enabledness conditions; give enab_left and enab_right".to_string());
                    return;
                }
            }
        }
        let e1 = enabs.0.as_ref().map(|t1| Cond::and(j.enab.clone().unwrap(), t1.clone()));
        let e2 = enabs.1.as_ref().map(|t2| Cond::and(j.enab.clone().unwrap(), t2.clone()));
        cx.premise(0, prem[0], &Cond::or(r.clone(), g2.clone()), g1, phi, p, psi1, e1.as_ref());
        cx.premise(1, prem[1], &Cond::or(r.clone(), g1.clone()), g2, phi, q, psi2, e2.as_ref());
        cx.same("guarantee", &Cond::or(g1.clone(), g2.clone()), &j.guar);
        cx.same("post", &Cond::and(psi1.clone(), psi2.clone()), &j.post);
        if let (Some(t1), Some(t2)) = enabs {
            cx.obl(ObligationKind::EnabLeft, Cond::implies(psi2.clone(), t1.clone()));
            cx.obl(ObligationKind::EnabRight, Cond::implies(psi1.clone(), t2.clone()));
            cx.obl(ObligationKind::EnabCover, Cond::or(t1, t2));
        }
    }

    fn auxiliary(&self, d: &Derivation, prem: &[&Judgment], cx: &mut NodeCx<'_>) {
        let j = &d.concl;
        let Some(a) = &d.data.aux else {
            cx.mismatch("auxiliary variable rule needs the set aux".to_string());
            return;
        };
        let p = &prem[0].proc;
        if !p.is_aux_set(a) {
            cx.mismatch(format!("side condition: {a:?} is not a set of auxiliary variables of {p}"));
            return;
        }
        match p.erase_aux(a) {
            Ok(erased) => cx.same_proc("conclusion", &erased, &j.proc),
            Err(e) => cx.mismatch(e.to_string()),
        }
        let mut conds = vec![&j.pre, &j.post, &j.rely, &j.guar];
        if let Some(t) = &j.enab {
            conds.push(t);
        }
        let clash: Vec<String> = fvar(conds).intersection(a).map(|v| v.to_string()).collect();
        if !clash.is_empty() {
            cx.mismatch(format!("side condition: auxiliary variables {{{}}} occur in the conclusion", clash.join(", ")));
        }
        let phi1 = d.data.pre_extra.clone().unwrap_or_else(Cond::tt);
        let r1 = d.data.rely_extra.clone().unwrap_or_else(Cond::tt);
        let theta1 = d.data.enab_extra.clone().unwrap_or_else(Cond::tt);
        let enab = j.enab.as_ref().map(|t| Cond::and(t.clone(), theta1.clone()));
        cx.premise(
            0,
            prem[0],
            &Cond::and(j.rely.clone(), r1.clone()),
            &j.guar,
            &Cond::and(j.pre.clone(), phi1.clone()),
            p,
            &j.post,
            enab.as_ref(),
        );
        cx.obl(ObligationKind::PreStable, stable(&j.pre, &j.rely));
        cx.obl(ObligationKind::AuxPre, exists_closure(&phi1, a));
        cx.obl(ObligationKind::AuxRely, exists_closure(&r1, a));
        if j.enab.is_some() {
            cx.obl(ObligationKind::AuxEnab, exists_closure(&theta1, a));
        }
    }
}

/// Checks `d` in `mode` with default options.
pub fn check(spec: &DataSpec, d: &Derivation, mode: Mode) -> Report {
    Checker::new(spec, mode).check(d)
}

// ---------------------------------------------------------------------------
// Files

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_extra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rely_extra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enab_extra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordinal_var: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enab_left: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enab_right: Option<String>,
}

impl RawData {
    fn is_empty(&self) -> bool {
        self.chi.is_none()
            && self.aux.is_none()
            && self.pre_extra.is_none()
            && self.rely_extra.is_none()
            && self.enab_extra.is_none()
            && self.ordinal_var.is_none()
            && self.invariant.is_none()
            && self.enab_left.is_none()
            && self.enab_right.is_none()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawJudgment {
    pub rely: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enab: Option<String>,
    pub guar: String,
    pub pre: String,
    pub proc: String,
    pub post: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNode {
    pub rule: String,
    pub rely: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enab: Option<String>,
    pub guar: String,
    pub pre: String,
    pub proc: String,
    pub post: String,
    #[serde(default, skip_serializing_if = "RawData::is_empty")]
    pub data: RawData,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<RawNode>,
}

/// A proof file: an optional mode, the names of ordinal-sorted bound variables, and the tree.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ordinal_vars: Vec<String>,
    pub root: RawNode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JudgmentFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ordinal_vars: Vec<String>,
    pub judgment: RawJudgment,
}

fn ron_options() -> ron::Options {
    ron::Options::default().with_default_extension(ron::extensions::Extensions::IMPLICIT_SOME)
}

fn to_ron<T: Serialize>(value: &T) -> String {
    let pretty = ron::ser::PrettyConfig::new()
        .struct_names(false)
        .extensions(ron::extensions::Extensions::IMPLICIT_SOME);
    ron_options().to_string_pretty(value, pretty).expect("proof trees serialize")
}

fn cond_field(ctx: &ParseCtx, field: &str, text: &str) -> Result<Cond, RgError> {
    parse_cond(text, ctx).map_err(|source| RgError::Parse { field: field.to_string(), source })
}

fn proc_field(ctx: &ParseCtx, field: &str, text: &str) -> Result<Proc, RgError> {
    parse_proc(text, ctx).map_err(|source| RgError::Parse { field: field.to_string(), source })
}

fn opt_cond(ctx: &ParseCtx, field: &str, text: &Option<String>) -> Result<Option<Cond>, RgError> {
    text.as_ref().map(|t| cond_field(ctx, field, t)).transpose()
}

impl RawJudgment {
    pub fn resolve(&self, ctx: &ParseCtx, at: &str) -> Result<Judgment, RgError> {
        Ok(Judgment {
            rely: cond_field(ctx, &format!("{at} rely"), &self.rely)?,
            guar: cond_field(ctx, &format!("{at} guar"), &self.guar)?,
            pre: cond_field(ctx, &format!("{at} pre"), &self.pre)?,
            proc: proc_field(ctx, &format!("{at} proc"), &self.proc)?,
            post: cond_field(ctx, &format!("{at} post"), &self.post)?,
            enab: opt_cond(ctx, &format!("{at} enab"), &self.enab)?,
        })
    }

    pub fn from_judgment(j: &Judgment) -> Self {
        RawJudgment {
            rely: j.rely.to_string(),
            enab: j.enab.as_ref().map(|t| t.to_string()),
            guar: j.guar.to_string(),
            pre: j.pre.to_string(),
            proc: j.proc.to_string(),
            post: j.post.to_string(),
        }
    }
}

impl RawNode {
    fn resolve(&self, ctx: &ParseCtx, path: &mut Vec<usize>) -> Result<Derivation, RgError> {
        let at = NodePath(path.clone()).to_string();
        let concl = RawJudgment {
            rely: self.rely.clone(),
            enab: self.enab.clone(),
            guar: self.guar.clone(),
            pre: self.pre.clone(),
            proc: self.proc.clone(),
            post: self.post.clone(),
        }
        .resolve(ctx, &at)?;
        let raw = &self.data;
        let data = RuleData {
            chi: opt_cond(ctx, &format!("{at} chi"), &raw.chi)?,
            aux: match &raw.aux {
                None => None,
                Some(names) => {
                    let mut set = BTreeSet::new();
                    for n in names {
                        let v = Var::new(n);
                        if !ctx.flex_vars.contains(&v) {
                            return Err(RgError::Malformed(format!("{at}: `{n}` is not a flexible variable")));
                        }
                        set.insert(v);
                    }
                    Some(set)
                }
            },
            pre_extra: opt_cond(ctx, &format!("{at} pre_extra"), &raw.pre_extra)?,
            rely_extra: opt_cond(ctx, &format!("{at} rely_extra"), &raw.rely_extra)?,
            enab_extra: opt_cond(ctx, &format!("{at} enab_extra"), &raw.enab_extra)?,
            ordinal_var: raw.ordinal_var.as_deref().map(Var::new),
            invariant: opt_cond(ctx, &format!("{at} invariant"), &raw.invariant)?,
            enab_left: opt_cond(ctx, &format!("{at} enab_left"), &raw.enab_left)?,
            enab_right: opt_cond(ctx, &format!("{at} enab_right"), &raw.enab_right)?,
        };
        let mut premises = Vec::new();
        for (k, p) in self.premises.iter().enumerate() {
            path.push(k);
            premises.push(p.resolve(ctx, path)?);
            path.pop();
        }
        let rule = self.rule.parse().map_err(|e| RgError::Malformed(format!("{at}: {e}")))?;
        Ok(Derivation { rule, concl, data, premises })
    }

    pub fn from_derivation(d: &Derivation) -> Self {
        let j = RawJudgment::from_judgment(&d.concl);
        let s = |c: &Option<Cond>| c.as_ref().map(|c| c.to_string());
        RawNode {
            rule: d.rule.name().to_string(),
            rely: j.rely,
            enab: j.enab,
            guar: j.guar,
            pre: j.pre,
            proc: j.proc,
            post: j.post,
            data: RawData {
                chi: s(&d.data.chi),
                aux: d.data.aux.as_ref().map(|a| a.iter().map(|v| v.to_string()).collect()),
                pre_extra: s(&d.data.pre_extra),
                rely_extra: s(&d.data.rely_extra),
                enab_extra: s(&d.data.enab_extra),
                ordinal_var: d.data.ordinal_var.as_ref().map(|v| v.to_string()),
                invariant: s(&d.data.invariant),
                enab_left: s(&d.data.enab_left),
                enab_right: s(&d.data.enab_right),
            },
            premises: d.premises.iter().map(RawNode::from_derivation).collect(),
        }
    }
}

fn ctx_with(spec: &DataSpec, ordinal_vars: &[String]) -> ParseCtx {
    ParseCtx::from_spec(spec).with_ordinal_vars(ordinal_vars.iter().map(String::as_str))
}

impl ProofFile {
    pub fn parse(text: &str) -> Result<Self, RgError> {
        ron_options().from_str(text).map_err(|e| RgError::Ron(e.to_string()))
    }

    pub fn resolve(&self, spec: &DataSpec) -> Result<Derivation, RgError> {
        self.root.resolve(&ctx_with(spec, &self.ordinal_vars), &mut Vec::new())
    }

    pub fn from_derivation(d: &Derivation, mode: Option<Mode>, ordinal_vars: &[&str]) -> Self {
        ProofFile {
            mode: mode.map(|m| m.name().to_string()),
            ordinal_vars: ordinal_vars.iter().map(|s| s.to_string()).collect(),
            root: RawNode::from_derivation(d),
        }
    }

    pub fn to_ron(&self) -> String {
        to_ron(self)
    }
}

impl JudgmentFile {
    pub fn parse(text: &str) -> Result<Self, RgError> {
        ron_options().from_str(text).map_err(|e| RgError::Ron(e.to_string()))
    }

    pub fn resolve(&self, spec: &DataSpec) -> Result<Judgment, RgError> {
        self.judgment.resolve(&ctx_with(spec, &self.ordinal_vars), "judgment")
    }

    pub fn from_judgment(j: &Judgment, mode: Option<Mode>, ordinal_vars: &[&str]) -> Self {
        JudgmentFile {
            mode: mode.map(|m| m.name().to_string()),
            ordinal_vars: ordinal_vars.iter().map(|s| s.to_string()).collect(),
            judgment: RawJudgment::from_judgment(j),
        }
    }

    pub fn to_ron(&self) -> String {
        to_ron(self)
    }
}

/// Loads a proof file and resolves it against `spec`.
pub fn load_proof(spec: &DataSpec, text: &str) -> Result<(Option<Mode>, Derivation), RgError> {
    let file = ProofFile::parse(text)?;
    let d = file.resolve(spec)?;
    Ok((file.mode.as_deref().map(str::parse).transpose()?, d))
}

/// Loads a judgment file and resolves it against `spec`.
pub fn load_judgment(spec: &DataSpec, text: &str) -> Result<(Option<Mode>, Judgment), RgError> {
    let file = JudgmentFile::parse(text)?;
    let j = file.resolve(spec)?;
    Ok((file.mode.as_deref().map(str::parse).transpose()?, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(spec: &DataSpec) -> ParseCtx {
        ParseCtx::from_spec(spec)
    }

    fn c(spec: &DataSpec, s: &str) -> Cond {
        parse_cond(s, &ctx(spec)).unwrap()
    }

    fn j(spec: &DataSpec, r: &str, g: &str, pre: &str, p: &str, post: &str) -> Judgment {
        Judgment::new(c(spec, r), c(spec, g), c(spec, pre), parse_proc(p, &ctx(spec)).unwrap(), c(spec, post))
    }

    #[test]
    fn inaction_accepts_anything() {
        let spec = DataSpec::default_spec();
        let d = Derivation::leaf(Rule::Inaction, j(&spec, "true", "false", "i = 0", "delta", "false"));
        let report = check(&spec, &d, Mode::Partial);
        assert!(report.accepted(), "{report}");
        assert!(Checker::new(&spec, Mode::Partial).obligations(&d).is_empty());
    }

    #[test]
    fn assignment_obligations() {
        let spec = DataSpec::default_spec();
        let d = Derivation::leaf(
            Rule::Assignment,
            j(&spec, "i = 0 or i = i~", "i = i~ + 1 or i = i~", "i = 0", "i := i + 1", "i = 0 or i = 1"),
        );
        let obls = Checker::new(&spec, Mode::Partial).obligations(&d);
        assert_eq!(obls.len(), 4);
        assert_eq!(obls[0].cond, c(&spec, "i = 0 => (i + 1 = 0 or i + 1 = 1)"));
        assert!(check(&spec, &d, Mode::Partial).accepted());
    }

    #[test]
    fn wrong_rule_shape_rejected() {
        let spec = DataSpec::default_spec();
        let d = Derivation::leaf(Rule::Empty, j(&spec, "true", "true", "true", "a", "true"));
        let report = check(&spec, &d, Mode::Partial);
        assert!(!report.accepted());
        assert_eq!(report.rejection().unwrap().0, NodePath(vec![]));
    }

    #[test]
    fn unstable_pre_rejected_with_counterexample() {
        let spec = DataSpec::default_spec();
        let d = Derivation::leaf(Rule::Empty, j(&spec, "true", "true", "i = 0", "eps", "i = 0"));
        let report = check(&spec, &d, Mode::Partial);
        let (_, reason) = report.rejection().unwrap();
        assert!(reason.contains("pre-stable"), "{reason}");
        assert!(reason.contains("counterexample"), "{reason}");
    }

    #[test]
    fn enabledness_required_in_deadlock_mode() {
        let spec = DataSpec::default_spec();
        let d = Derivation::leaf(Rule::Inaction, j(&spec, "true", "true", "true", "delta", "true"));
        assert!(!check(&spec, &d, Mode::DeadlockFree).accepted());
        let mut d2 = d.clone();
        d2.concl.enab = Some(Cond::False);
        assert!(check(&spec, &d2, Mode::DeadlockFree).accepted());
        d2.concl.enab = Some(Cond::tt());
        assert!(!check(&spec, &d2, Mode::DeadlockFree).accepted());
    }

    #[test]
    fn preservation_scan_inaction() {
        let spec = DataSpec::default_spec();
        let d = Derivation::leaf(Rule::Inaction, j(&spec, "true", "true", "i = 0", "delta", "true"));
        let scan = Checker::new(&spec, Mode::Partial).preservation_scan(&d);
        assert_eq!(scan, vec![(NodePath(vec![]), false, true)]);
    }

    #[test]
    fn ron_round_trip() {
        let spec = DataSpec::default_spec();
        let d = Derivation::node(
            Rule::Consequence,
            j(&spec, "i = i~", "true", "i = 0", "i := 0", "true"),
            vec![Derivation::leaf(Rule::Assignment, j(&spec, "i = i~", "true", "true", "i := 0", "true"))],
        );
        let text = ProofFile::from_derivation(&d, Some(Mode::Partial), &[]).to_ron();
        let (mode, back) = load_proof(&spec, &text).unwrap();
        assert_eq!(mode, Some(Mode::Partial));
        assert_eq!(back, d);
    }
}
