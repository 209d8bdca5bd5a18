//! Computations, assumption/commitment satisfaction and bounded truth of
//! asserted processes by explicit-state search over the finite valuation space.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{DataSpec, EvalError, Value};
use crate::parse::{parse_proc, ParseCtx, ParseError};
use crate::rg::{Judgment, Mode, RawJudgment, RgError};
use crate::semantics::{is_terminal, step, sync, Label, StepError};
use crate::terms::*;

pub type State = (Proc, Valuation);

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Rg(#[from] RgError),
    #[error("witness: {0}")]
    Witness(String),
    #[error("witness term: {0}")]
    Parse(#[from] ParseError),
}

/// `(p1, rho1) --l1--> (p2, rho2) ... --ln--> (p(n+1), rho(n+1))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Computation {
    pub start: State,
    pub steps: Vec<(Label, State)>,
}

impl Computation {
    pub fn new(p: Proc, rho: Valuation) -> Self {
        Computation { start: (p, rho), steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The `i`-th state, `0 ..= len()`.
    pub fn state(&self, i: usize) -> &State {
        if i == 0 {
            &self.start
        } else {
            &self.steps[i - 1].1
        }
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.steps[i].0
    }

    pub fn last(&self) -> &State {
        self.state(self.len())
    }

    pub fn push(&mut self, label: Label, state: State) {
        self.steps.push((label, state));
    }

    /// `(before, label, after)` for every step.
    pub fn triples(&self) -> impl Iterator<Item = (&State, &Label, &State)> {
        (0..self.len()).map(move |i| (self.state(i), self.label(i), self.state(i + 1)))
    }

    /// Whether every step is in the step relation.
    pub fn is_valid(&self, spec: &DataSpec) -> Result<bool, OracleError> {
        for (before, label, after) in self.triples() {
            if !valid_step(spec, before, label, after)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Computation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.start.0, self.start.1)?;
        for (l, (p, rho)) in &self.steps {
            write!(f, "\n  --{l}--> ({p}, {rho})")?;
        }
        Ok(())
    }
}

fn valid_step(spec: &DataSpec, before: &State, label: &Label, after: &State) -> Result<bool, OracleError> {
    Ok(match label {
        Label::Env => before.0 == after.0,
        Label::Act(a) => step(spec, &before.0, &before.1)?
            .iter()
            .any(|(b, p, r)| b == a && *p == after.0 && *r == after.1),
    })
}

/// `σ asat (φ, R)`.
pub fn asat(spec: &DataSpec, sigma: &Computation, phi: &Cond, rely: &Cond) -> Result<bool, EvalError> {
    if !spec.holds1(phi, &sigma.start.1)? {
        return Ok(false);
    }
    for (before, label, after) in sigma.triples() {
        if *label == Label::Env && !spec.holds2(rely, &after.1, &before.1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `σ csat (ψ, G)`; the last process counts as `ε` when it is terminal.
pub fn csat(spec: &DataSpec, sigma: &Computation, psi: &Cond, guar: &Cond) -> Result<bool, OracleError> {
    let (p, rho) = sigma.last();
    if is_terminal(spec, p, rho)? && !spec.holds1(psi, rho)? {
        return Ok(false);
    }
    for (before, label, after) in sigma.triples() {
        if *label != Label::Env && !spec.holds2(guar, &after.1, &before.1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `σ esat θ`.
pub fn esat(spec: &DataSpec, sigma: &Computation, theta: &Cond) -> Result<bool, OracleError> {
    let (p, rho) = sigma.last();
    if !spec.holds1(theta, rho)? {
        return Ok(true);
    }
    Ok(is_terminal(spec, p, rho)? || !step(spec, p, rho)?.is_empty())
}

/// Which environment steps a search generates.
#[derive(Clone, Debug)]
pub enum EnvSteps {
    /// To every valuation.
    All,
    /// To valuations `rho'` with `[rho', rho] ⊨ R`.
    Rely(Cond),
    None,
}

#[derive(Default)]
struct StepCache {
    map: HashMap<State, Vec<(AtomicAction, Proc, Valuation)>>,
}

impl StepCache {
    fn get(&mut self, spec: &DataSpec, s: &State) -> Result<&Vec<(AtomicAction, Proc, Valuation)>, StepError> {
        if !self.map.contains_key(s) {
            let v = step(spec, &s.0, &s.1)?;
            self.map.insert(s.clone(), v);
        }
        Ok(&self.map[s])
    }
}

fn env_targets(spec: &DataSpec, env: &EnvSteps, vals: &[Valuation], rho: &Valuation) -> Result<Vec<Valuation>, EvalError> {
    match env {
        EnvSteps::None => Ok(Vec::new()),
        EnvSteps::All => Ok(vals.to_vec()),
        EnvSteps::Rely(r) => {
            let mut out = Vec::new();
            for v in vals {
                if spec.holds2(r, v, rho)? {
                    out.push(v.clone());
                }
            }
            Ok(out)
        }
    }
}

/// Calls `f` on every computation of `p` with `1 ..= max_len` steps, from every
/// initial valuation. Stops early when `f` returns `false`.
pub fn for_each_computation(
    spec: &DataSpec,
    p: &Proc,
    max_len: usize,
    env: &EnvSteps,
    f: &mut dyn FnMut(&Computation) -> bool,
) -> Result<(), OracleError> {
    let vals = spec.valuations();
    let mut cache = StepCache::default();
    fn go(
        spec: &DataSpec,
        vals: &[Valuation],
        env: &EnvSteps,
        cache: &mut StepCache,
        sigma: &mut Computation,
        max_len: usize,
        f: &mut dyn FnMut(&Computation) -> bool,
    ) -> Result<bool, OracleError> {
        if sigma.len() == max_len {
            return Ok(true);
        }
        let (p, rho) = sigma.last().clone();
        let mut succ: Vec<(Label, State)> = cache
            .get(spec, &(p.clone(), rho.clone()))?
            .iter()
            .map(|(a, q, r)| (Label::Act(a.clone()), (q.clone(), r.clone())))
            .collect();
        for r in env_targets(spec, env, vals, &rho)? {
            succ.push((Label::Env, (p.clone(), r)));
        }
        for (l, s) in succ {
            sigma.push(l, s);
            let go_on = f(sigma) && go(spec, vals, env, cache, sigma, max_len, f)?;
            sigma.steps.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
    for rho in &vals {
        let mut sigma = Computation::new(p.clone(), rho.clone());
        if !go(spec, &vals, env, &mut cache, &mut sigma, max_len, f)? {
            break;
        }
    }
    Ok(())
}

/// All computations of `p` with `1 ..= max_len` steps.
pub fn computations(spec: &DataSpec, p: &Proc, max_len: usize, env: &EnvSteps) -> Result<Vec<Computation>, OracleError> {
    let mut out = Vec::new();
    for_each_computation(spec, p, max_len, env, &mut |s| {
        out.push(s.clone());
        true
    })?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Truth

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// A process step at this index breaks the guarantee.
    Guarantee { step: usize },
    /// The computation ends terminated in a state violating the postcondition.
    Post,
    /// The enabledness condition holds in the last state, which is stuck.
    Disabled,
    /// States `loop_start ..= len` form a cycle with a process step.
    Divergence { loop_start: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Guarantee { step } => write!(f, "guarantee violated by step {}", step + 1),
            Violation::Post => f.write_str("postcondition violated on termination"),
            Violation::Disabled => f.write_str("enabledness condition holds in a stuck state"),
            Violation::Divergence { loop_start } => {
                write!(f, "infinitely many process steps (cycle from state {})", loop_start + 1)
            }
        }
    }
}

/// A refuting computation together with the instance it refutes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub mode: Mode,
    pub judgment: Judgment,
    pub binding: Vec<(Var, Sort, Value)>,
    pub computation: Computation,
    pub violation: Violation,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.violation)?;
        if !self.binding.is_empty() {
            let b: Vec<String> = self.binding.iter().map(|(x, _, v)| format!("{x}={v}")).collect();
            writeln!(f, "instance: {}", b.join(", "))?;
        }
        write!(f, "{}", self.computation)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub instances: usize,
    pub states: usize,
    pub edges: usize,
    pub max_len: usize,
    pub max_states: usize,
    pub complete: bool,
    pub domain: (i64, i64),
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} instance(s), {} states, {} edges, max_len {}, max_states {}, domain [{}, {}]{}",
            self.instances,
            self.states,
            self.edges,
            self.max_len,
            self.max_states,
            self.domain.0,
            self.domain.1,
            if self.complete { "" } else { ", exploration cut off" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TruthVerdict {
    Holds(BoundReport),
    Refuted(Box<Witness>),
    Inconclusive(BoundReport),
}

impl TruthVerdict {
    pub fn is_holds(&self) -> bool {
        matches!(self, TruthVerdict::Holds(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, TruthVerdict::Refuted(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            TruthVerdict::Holds(_) => "HOLDS",
            TruthVerdict::Refuted(_) => "REFUTED",
            TruthVerdict::Inconclusive(_) => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for TruthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthVerdict::Holds(b) | TruthVerdict::Inconclusive(b) => write!(f, "{} ({b})", self.name()),
            TruthVerdict::Refuted(w) => write!(f, "REFUTED: {w}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TruthOptions {
    pub mode: Mode,
    pub max_len: usize,
    pub max_states: usize,
    /// Generate environment steps at all.
    pub env: bool,
}

impl TruthOptions {
    pub fn new(mode: Mode, max_len: usize) -> Self {
        TruthOptions { mode, max_len, max_states: 100_000, env: true }
    }

    pub fn with_max_states(mut self, n: usize) -> Self {
        self.max_states = n;
        self
    }

    pub fn without_env(mut self) -> Self {
        self.env = false;
        self
    }
}

/// Closed instances: every free logical variable of the conditions bound to a carrier value.
fn instances(spec: &DataSpec, j: &Judgment) -> Result<Vec<(Vec<(Var, Sort, Value)>, Judgment)>, EvalError> {
    let mut free: BTreeSet<(Var, Sort)> = BTreeSet::new();
    for c in [&j.rely, &j.guar, &j.pre, &j.post].into_iter().chain(j.enab.as_ref()) {
        free.extend(c.free_bound_vars());
    }
    let free: Vec<(Var, Sort)> = free.into_iter().collect();
    let mut out = Vec::new();
    for b in spec.bindings(&free)? {
        let subst = |c: &Cond| {
            b.iter().fold(c.clone(), |acc, (x, v)| acc.subst_bound(x, &DataSpec::literal(v)))
        };
        let inst = Judgment {
            rely: subst(&j.rely),
            guar: subst(&j.guar),
            pre: subst(&j.pre),
            proc: j.proc.clone(),
            post: subst(&j.post),
            enab: j.enab.as_ref().map(subst),
        };
        let binding = free.iter().zip(&b).map(|((x, s), (_, v))| (x.clone(), *s, v.clone())).collect();
        out.push((binding, inst));
    }
    Ok(out)
}

struct Search<'a> {
    spec: &'a DataSpec,
    opts: &'a TruthOptions,
    j: &'a Judgment,
    vals: Vec<Valuation>,
    env: EnvSteps,
    nodes: Vec<State>,
    index: HashMap<State, usize>,
    parent: Vec<Option<(usize, Label)>>,
    depth: Vec<usize>,
    steps: Vec<Vec<(AtomicAction, Proc, Valuation)>>,
    edges: Vec<(usize, usize, bool)>,
    complete: bool,
}

impl<'a> Search<'a> {
    fn new(spec: &'a DataSpec, opts: &'a TruthOptions, j: &'a Judgment) -> Self {
        Search {
            spec,
            opts,
            j,
            vals: spec.valuations(),
            env: if opts.env { EnvSteps::Rely(j.rely.clone()) } else { EnvSteps::None },
            nodes: Vec::new(),
            index: HashMap::new(),
            parent: Vec::new(),
            depth: Vec::new(),
            steps: Vec::new(),
            edges: Vec::new(),
            complete: true,
        }
    }

    fn add(&mut self, s: State, parent: Option<(usize, Label)>, depth: usize) -> Result<usize, OracleError> {
        let k = self.nodes.len();
        self.steps.push(step(self.spec, &s.0, &s.1)?);
        self.index.insert(s.clone(), k);
        self.nodes.push(s);
        self.parent.push(parent);
        self.depth.push(depth);
        Ok(k)
    }

    fn path(&self, mut k: usize) -> Computation {
        let mut rev = Vec::new();
        while let Some((u, l)) = &self.parent[k] {
            rev.push((l.clone(), self.nodes[k].clone()));
            k = *u;
        }
        rev.reverse();
        Computation { start: self.nodes[k].clone(), steps: rev }
    }

    fn node_violation(&self, k: usize) -> Result<Option<Violation>, OracleError> {
        let (p, rho) = &self.nodes[k];
        let stuck = self.steps[k].is_empty();
        let terminal = stuck && crate::semantics::terminates(self.spec, p, rho)?;
        if terminal && !self.spec.holds1(&self.j.post, rho)? {
            return Ok(Some(Violation::Post));
        }
        if self.opts.mode == Mode::DeadlockFree {
            if let Some(theta) = &self.j.enab {
                if stuck && !terminal && self.spec.holds1(theta, rho)? {
                    return Ok(Some(Violation::Disabled));
                }
            }
        }
        Ok(None)
    }

    fn run(&mut self) -> Result<Option<(Computation, Violation)>, OracleError> {
        let mut queue = VecDeque::new();
        for rho in self.vals.clone() {
            if !self.spec.holds1(&self.j.pre, &rho)? {
                continue;
            }
            let s = (self.j.proc.clone(), rho);
            if self.index.contains_key(&s) {
                continue;
            }
            let k = self.add(s, None, 0)?;
            if let Some(v) = self.node_violation(k)? {
                return Ok(Some((self.path(k), v)));
            }
            queue.push_back(k);
        }
        while let Some(u) = queue.pop_front() {
            let (p, rho) = self.nodes[u].clone();
            let mut succ: Vec<(Label, State)> = self.steps[u]
                .iter()
                .map(|(a, q, r)| (Label::Act(a.clone()), (q.clone(), r.clone())))
                .collect();
            for r in env_targets(self.spec, &self.env, &self.vals, &rho)? {
                succ.push((Label::Env, (p.clone(), r)));
            }
            for (l, s) in succ {
                let process = l != Label::Env;
                if process && !self.spec.holds2(&self.j.guar, &s.1, &rho)? {
                    let mut sigma = self.path(u);
                    let at = sigma.len();
                    sigma.push(l, s);
                    return Ok(Some((sigma, Violation::Guarantee { step: at })));
                }
                if let Some(&v) = self.index.get(&s) {
                    self.edges.push((u, v, process));
                    continue;
                }
                if self.depth[u] >= self.opts.max_len || self.nodes.len() >= self.opts.max_states {
                    self.complete = false;
                    continue;
                }
                let v = self.add(s, Some((u, l)), self.depth[u] + 1)?;
                self.edges.push((u, v, process));
                if let Some(viol) = self.node_violation(v)? {
                    return Ok(Some((self.path(v), viol)));
                }
                queue.push_back(v);
            }
        }
        if self.opts.mode != Mode::Partial {
            if let Some(lasso) = self.lasso() {
                return Ok(Some(lasso));
            }
        }
        Ok(None)
    }

    /// A reachable cycle containing a process step, as a lasso-shaped computation.
    fn lasso(&self) -> Option<(Computation, Violation)> {
        let mut g: DiGraph<(), bool> = DiGraph::new();
        let ids: Vec<NodeIndex> = (0..self.nodes.len()).map(|_| g.add_node(())).collect();
        for &(u, v, proc) in &self.edges {
            g.add_edge(ids[u], ids[v], proc);
        }
        let mut comp = vec![usize::MAX; self.nodes.len()];
        let sccs = tarjan_scc(&g);
        for (c, scc) in sccs.iter().enumerate() {
            for n in scc {
                comp[n.index()] = c;
            }
        }
        let mut candidates: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|(u, v, proc)| *proc && comp[*u] == comp[*v])
            .map(|(u, v, _)| (*u, *v))
            .collect();
        candidates.sort_by_key(|(u, _)| (self.depth[*u], *u));
        let &(u, v) = candidates.first()?;
        let label_of = |a: usize, b: usize, proc: bool| -> Label {
            if !proc {
                return Label::Env;
            }
            let target = &self.nodes[b];
            self.steps[a]
                .iter()
                .find(|(_, q, r)| *q == target.0 && *r == target.1)
                .map(|(act, _, _)| Label::Act(act.clone()))
                .expect("process edge has a step")
        };
        let mut sigma = self.path(u);
        let loop_start = sigma.len();
        sigma.push(label_of(u, v, true), self.nodes[v].clone());
        if v != u {
            let c = comp[u];
            let mut prev: HashMap<usize, (usize, bool)> = HashMap::new();
            let mut queue = VecDeque::from([v]);
            let mut seen = BTreeSet::from([v]);
            while let Some(x) = queue.pop_front() {
                if x == u {
                    break;
                }
                for &(a, b, proc) in &self.edges {
                    if a == x && comp[b] == c && seen.insert(b) {
                        prev.insert(b, (a, proc));
                        queue.push_back(b);
                    }
                }
            }
            let mut back = Vec::new();
            let mut x = u;
            while x != v {
                let (a, proc) = prev[&x];
                back.push((label_of(a, x, proc), self.nodes[x].clone()));
                x = a;
            }
            back.reverse();
            for (l, s) in back {
                sigma.push(l, s);
            }
        }
        Some((sigma, Violation::Divergence { loop_start }))
    }
}

/// Bounded truth of `j` in `opts.mode` over all closed instances.
pub fn check_truth(spec: &DataSpec, j: &Judgment, opts: &TruthOptions) -> Result<TruthVerdict, OracleError> {
    if !j.proc.is_rg() {
        return Err(StepError::NotRg(j.proc.to_string()).into());
    }
    let insts = instances(spec, j)?;
    let mut report = BoundReport {
        instances: insts.len(),
        states: 0,
        edges: 0,
        max_len: opts.max_len,
        max_states: opts.max_states,
        complete: true,
        domain: (spec.lo, spec.hi),
    };
    for (binding, inst) in &insts {
        let mut search = Search::new(spec, opts, inst);
        let found = search.run()?;
        report.states += search.nodes.len();
        report.edges += search.edges.len();
        report.complete &= search.complete;
        if let Some((computation, violation)) = found {
            return Ok(TruthVerdict::Refuted(Box::new(Witness {
                mode: opts.mode,
                judgment: j.clone(),
                binding: binding.clone(),
                computation,
                violation,
            })));
        }
    }
    Ok(if report.complete { TruthVerdict::Holds(report) } else { TruthVerdict::Inconclusive(report) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Convergence {
    AllConverge,
    Divergence(Computation),
    Inconclusive,
}

/// Searches for a reachable cycle with a process step under the assumptions `φ` and `R`.
pub fn convergent_bounded(
    spec: &DataSpec,
    p: &Proc,
    phi: &Cond,
    rely: &Cond,
    max_states: usize,
) -> Result<Convergence, OracleError> {
    let j = Judgment::new(rely.clone(), Cond::tt(), phi.clone(), p.clone(), Cond::tt());
    let opts = TruthOptions::new(Mode::WeakTotal, usize::MAX).with_max_states(max_states);
    let mut search = Search::new(spec, &opts, &j);
    Ok(match search.run()? {
        Some((sigma, Violation::Divergence { .. })) => Convergence::Divergence(sigma),
        Some(_) => unreachable!("trivial commitments cannot fail"),
        None if search.complete => Convergence::AllConverge,
        None => Convergence::Inconclusive,
    })
}

// ---------------------------------------------------------------------------
// Replay

fn instance_of(w: &Witness) -> Judgment {
    let subst = |c: &Cond| {
        w.binding.iter().fold(c.clone(), |acc, (x, _, v)| acc.subst_bound(x, &DataSpec::literal(v)))
    };
    let j = &w.judgment;
    Judgment {
        rely: subst(&j.rely),
        guar: subst(&j.guar),
        pre: subst(&j.pre),
        proc: j.proc.clone(),
        post: subst(&j.post),
        enab: j.enab.as_ref().map(subst),
    }
}

/// Re-checks a witness from the step relation and the conditions alone.
pub fn replay(spec: &DataSpec, w: &Witness) -> Result<(), OracleError> {
    let fail = |m: String| Err(OracleError::Witness(m));
    let j = instance_of(w);
    let sigma = &w.computation;
    if sigma.start.0 != j.proc {
        return fail(format!("computation starts at {}, not at {}", sigma.start.0, j.proc));
    }
    for (k, (before, label, after)) in sigma.triples().enumerate() {
        if !valid_step(spec, before, label, after)? {
            return fail(format!("step {} is not in the step relation", k + 1));
        }
    }
    if !asat(spec, sigma, &j.pre, &j.rely)? {
        return fail("computation does not satisfy the assumptions".to_string());
    }
    let (p, rho) = sigma.last();
    match &w.violation {
        Violation::Guarantee { step: k } => {
            let (before, label, after) = sigma.triples().nth(*k).ok_or_else(|| OracleError::Witness("no such step".into()))?;
            if *label == Label::Env || spec.holds2(&j.guar, &after.1, &before.1)? {
                return fail(format!("step {} satisfies the guarantee", k + 1));
            }
        }
        Violation::Post => {
            if !is_terminal(spec, p, rho)? || spec.holds1(&j.post, rho)? {
                return fail("last state is not a terminated state violating the postcondition".to_string());
            }
        }
        Violation::Disabled => {
            let theta = j.enab.as_ref().ok_or_else(|| OracleError::Witness("no enabledness condition".into()))?;
            if esat(spec, sigma, theta)? {
                return fail("last state satisfies the enabledness commitment".to_string());
            }
        }
        Violation::Divergence { loop_start } => {
            if *loop_start >= sigma.len() || sigma.state(*loop_start) != sigma.last() {
                return fail("computation does not end where its cycle starts".to_string());
            }
            if sigma.steps[*loop_start..].iter().all(|(l, _)| *l == Label::Env) {
                return fail("cycle has no process step".to_string());
            }
        }
    }
    Ok(())
}

pub const WITNESS_SCHEMA: &str = "deacp-witness/1";

#[derive(Serialize, Deserialize)]
struct RawState {
    proc: String,
    rho: Valuation,
}

#[derive(Serialize, Deserialize)]
struct RawStep {
    label: String,
    proc: String,
    rho: Valuation,
}

#[derive(Serialize, Deserialize)]
struct RawBinding {
    var: String,
    sort: Sort,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct RawWitness {
    schema: String,
    mode: Mode,
    #[serde(default)]
    ordinal_vars: Vec<String>,
    judgment: RawJudgment,
    #[serde(default)]
    binding: Vec<RawBinding>,
    start: RawState,
    steps: Vec<RawStep>,
    violation: Violation,
}

impl Witness {
    pub fn to_json(&self) -> String {
        let ordinal_vars: BTreeSet<String> = [&self.judgment.rely, &self.judgment.guar, &self.judgment.pre, &self.judgment.post]
            .into_iter()
            .chain(self.judgment.enab.as_ref())
            .flat_map(|c| c.free_bound_vars())
            .filter(|(_, s)| *s == Sort::Ord)
            .map(|(v, _)| v.to_string())
            .collect();
        let raw = RawWitness {
            schema: WITNESS_SCHEMA.to_string(),
            mode: self.mode,
            ordinal_vars: ordinal_vars.into_iter().collect(),
            judgment: RawJudgment::from_judgment(&self.judgment),
            binding: self
                .binding
                .iter()
                .map(|(x, s, v)| RawBinding { var: x.to_string(), sort: *s, value: v.to_string() })
                .collect(),
            start: RawState { proc: self.computation.start.0.to_string(), rho: self.computation.start.1.clone() },
            steps: self
                .computation
                .steps
                .iter()
                .map(|(l, (p, rho))| RawStep { label: l.to_string(), proc: p.to_string(), rho: rho.clone() })
                .collect(),
            violation: self.violation.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("witness serializes")
    }

    pub fn from_json(spec: &DataSpec, text: &str) -> Result<Witness, OracleError> {
        let raw: RawWitness = serde_json::from_str(text).map_err(|e| OracleError::Witness(e.to_string()))?;
        if raw.schema != WITNESS_SCHEMA {
            return Err(OracleError::Witness(format!("unsupported schema `{}`", raw.schema)));
        }
        let ctx = ParseCtx::from_spec(spec).with_ordinal_vars(raw.ordinal_vars.iter().map(String::as_str));
        let judgment = raw.judgment.resolve(&ctx, "witness judgment")?;
        let mut binding = Vec::new();
        for b in &raw.binding {
            let value = parse_value(b.sort, &b.value)
                .ok_or_else(|| OracleError::Witness(format!("bad value `{}` for {}", b.value, b.var)))?;
            binding.push((Var::new(&b.var), b.sort, value));
        }
        let mut computation = Computation::new(parse_proc(&raw.start.proc, &ctx)?, raw.start.rho.clone());
        for s in &raw.steps {
            let label = if s.label == "e" {
                Label::Env
            } else {
                match &*parse_proc(&s.label, &ctx)? {
                    ProcTerm::Atom(a) => Label::Act(a.clone()),
                    other => return Err(OracleError::Witness(format!("label `{other}` is not an atomic action"))),
                }
            };
            computation.push(label, (parse_proc(&s.proc, &ctx)?, s.rho.clone()));
        }
        Ok(Witness { mode: raw.mode, judgment, binding, computation, violation: raw.violation })
    }
}

fn parse_value(sort: Sort, s: &str) -> Option<Value> {
    match sort {
        Sort::Data => s.parse().ok().map(Value::Int),
        Sort::Bool => match s {
            "1" => Some(Value::Bool(true)),
            "0" => Some(Value::Bool(false)),
            _ => None,
        },
        Sort::Ord => {
            if s == "omega" {
                Some(Value::Ord(OrdValue::Omega))
            } else {
                s.parse().ok().map(|n| Value::Ord(OrdValue::Fin(n)))
            }
        }
        Sort::Proc | Sort::Cond => None,
    }
}

// ---------------------------------------------------------------------------
// Conjoining computations

/// `l′ | l″`, when it is an atomic action.
pub fn communicate(spec: &DataSpec, l1: &AtomicAction, l2: &AtomicAction) -> Result<Option<AtomicAction>, EvalError> {
    sync(spec, l1, l2, &spec.base_valuation())
}

/// `σ ∝ σ′ ∥ σ″`.
pub fn conjoins(spec: &DataSpec, sigma: &Computation, s1: &Computation, s2: &Computation) -> Result<bool, EvalError> {
    if sigma.len() != s1.len() || sigma.len() != s2.len() {
        return Ok(false);
    }
    for i in 0..=sigma.len() {
        let (p, rho) = sigma.state(i);
        let (p1, rho1) = s1.state(i);
        let (p2, rho2) = s2.state(i);
        if *p != par(p1.clone(), p2.clone()) || rho != rho1 || rho != rho2 {
            return Ok(false);
        }
    }
    for i in 0..sigma.len() {
        let ok = match (sigma.label(i), s1.label(i), s2.label(i)) {
            (Label::Env, Label::Env, Label::Env) => true,
            (l, l1 @ Label::Act(_), Label::Env) => l == l1,
            (l, Label::Env, l2 @ Label::Act(_)) => l == l2,
            (Label::Act(a), Label::Act(a1), Label::Act(a2)) => communicate(spec, a1, a2)?.as_ref() == Some(a),
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Splits a computation of `p′ ∥ p″` into conjoining computations of `p′` and `p″`.
pub fn decompose(spec: &DataSpec, sigma: &Computation) -> Result<Option<(Computation, Computation)>, OracleError> {
    let split = |p: &Proc| match &**p {
        ProcTerm::Par(x, y) => Some((x.clone(), y.clone())),
        _ => None,
    };
    let Some((x0, y0)) = split(&sigma.start.0) else { return Ok(None) };
    let rho0 = sigma.start.1.clone();
    let mut s1 = Computation::new(x0, rho0.clone());
    let mut s2 = Computation::new(y0, rho0);
    for (before, label, after) in sigma.triples() {
        let Some((x1, y1)) = split(&after.0) else { return Ok(None) };
        let (x, y) = (s1.last().clone(), s2.last().clone());
        let rho2 = after.1.clone();
        let next1 = (x1.clone(), rho2.clone());
        let next2 = (y1.clone(), rho2.clone());
        let choice = match label {
            Label::Env => {
                if x.0 == x1 && y.0 == y1 {
                    Some((Label::Env, Label::Env))
                } else {
                    None
                }
            }
            Label::Act(a) => {
                let steps1 = step(spec, &x.0, &before.1)?;
                let steps2 = step(spec, &y.0, &before.1)?;
                let mut found = None;
                if y.0 == y1 && steps1.iter().any(|(b, q, r)| b == a && *q == x1 && *r == rho2) {
                    found = Some((label.clone(), Label::Env));
                } else if x.0 == x1 && steps2.iter().any(|(b, q, r)| b == a && *q == y1 && *r == rho2) {
                    found = Some((Label::Env, label.clone()));
                } else {
                    'outer: for (b1, q1, r1) in &steps1 {
                        if *q1 != x1 || *r1 != rho2 {
                            continue;
                        }
                        for (b2, q2, r2) in &steps2 {
                            if *q2 == y1 && *r2 == rho2 && communicate(spec, b1, b2)?.as_ref() == Some(a) {
                                found = Some((Label::Act(b1.clone()), Label::Act(b2.clone())));
                                break 'outer;
                            }
                        }
                    }
                }
                found
            }
        };
        let Some((l1, l2)) = choice else { return Ok(None) };
        s1.push(l1, next1);
        s2.push(l2, next2);
    }
    Ok(Some((s1, s2)))
}

/// Calls `f` with every composed computation of `p ∥ q` built from computations of
/// `p` and `q` of equal length `1 ..= max_len` that conjoin, together with whether
/// it is a computation of `p ∥ q`. Stops early when `f` returns `false`.
pub fn for_each_composition(
    spec: &DataSpec,
    p: &Proc,
    q: &Proc,
    max_len: usize,
    f: &mut dyn FnMut(&Computation, bool) -> bool,
) -> Result<(), OracleError> {
    let vals = spec.valuations();
    let mut cache = StepCache::default();
    #[allow(clippy::too_many_arguments)]
    fn go(
        spec: &DataSpec,
        vals: &[Valuation],
        cache: &mut StepCache,
        x: &Proc,
        y: &Proc,
        sigma: &mut Computation,
        max_len: usize,
        f: &mut dyn FnMut(&Computation, bool) -> bool,
    ) -> Result<bool, OracleError> {
        if sigma.len() == max_len {
            return Ok(true);
        }
        let rho = sigma.last().1.clone();
        let s1 = cache.get(spec, &(x.clone(), rho.clone()))?.clone();
        let s2 = cache.get(spec, &(y.clone(), rho.clone()))?.clone();
        let mut moves: Vec<(Label, Proc, Proc, Valuation)> = Vec::new();
        for (a, x1, r) in &s1 {
            moves.push((Label::Act(a.clone()), x1.clone(), y.clone(), r.clone()));
        }
        for (a, y1, r) in &s2 {
            moves.push((Label::Act(a.clone()), x.clone(), y1.clone(), r.clone()));
        }
        for (a1, x1, r1) in &s1 {
            for (a2, y1, r2) in &s2 {
                if r1 == r2 {
                    if let Some(c) = communicate(spec, a1, a2)? {
                        moves.push((Label::Act(c), x1.clone(), y1.clone(), r1.clone()));
                    }
                }
            }
        }
        for r in vals {
            moves.push((Label::Env, x.clone(), y.clone(), r.clone()));
        }
        for (l, x1, y1, r) in moves {
            let before = sigma.last().clone();
            let after = (par(x1.clone(), y1.clone()), r);
            let ok = valid_step(spec, &before, &l, &after)?;
            sigma.push(l, after);
            let go_on = f(sigma, ok) && go(spec, vals, cache, &x1, &y1, sigma, max_len, f)?;
            sigma.steps.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
    for rho in &vals {
        let mut sigma = Computation::new(par(p.clone(), q.clone()), rho.clone());
        if !go(spec, &vals, &mut cache, p, q, &mut sigma, max_len, f)? {
            break;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_cond;

    fn spec01() -> DataSpec {
        DataSpec::new(&["a", "b", "c"], &[("a", "b", "c")], &["i"], 0, 1).unwrap()
    }

    fn ctx(spec: &DataSpec) -> ParseCtx {
        ParseCtx::from_spec(spec)
    }

    #[test]
    fn computations_of_delta_are_env_only() {
        let spec = spec01();
        let cs = computations(&spec, &dead(), 1, &EnvSteps::All).unwrap();
        assert_eq!(cs.len(), 4);
        assert!(cs.iter().all(|c| *c.label(0) == Label::Env));
    }

    #[test]
    fn assignment_computation_present() {
        let spec = spec01();
        let p = parse_proc("i := 0", &ctx(&spec)).unwrap();
        let cs = computations(&spec, &p, 1, &EnvSteps::All).unwrap();
        let want = Computation {
            start: (p.clone(), Valuation::from_pairs([("i", 1)])),
            steps: vec![(Label::Act(AtomicAction::assign("i", DataTerm::Num(0))), (empty(), Valuation::from_pairs([("i", 0)])))],
        };
        assert!(cs.contains(&want));
    }

    #[test]
    fn asat_env_step_against_rely() {
        let spec = spec01();
        let mut s = Computation::new(dead(), Valuation::from_pairs([("i", 0)]));
        s.push(Label::Env, (dead(), Valuation::from_pairs([("i", 1)])));
        let r = parse_cond("i = i~", &ctx(&spec)).unwrap();
        assert!(!asat(&spec, &s, &Cond::tt(), &r).unwrap());
        assert!(asat(&spec, &s, &Cond::tt(), &Cond::tt()).unwrap());
    }

    #[test]
    fn esat_blocked_guard() {
        let spec = DataSpec::default_spec();
        let p = parse_proc("(i > 0) :-> (i := 2)", &ctx(&spec)).unwrap();
        let s = Computation::new(p, Valuation::from_pairs([("i", 0), ("j", -1)]));
        assert!(!esat(&spec, &s, &Cond::tt()).unwrap());
        assert!(esat(&spec, &s, &Cond::False).unwrap());
    }

    #[test]
    fn divergence_of_iterated_action() {
        let spec = spec01();
        let p = parse_proc("a * delta", &ctx(&spec)).unwrap();
        let verdict = convergent_bounded(&spec, &p, &Cond::tt(), &Cond::tt(), 1000).unwrap();
        assert!(matches!(verdict, Convergence::Divergence(_)));
        let q = parse_proc("a . eps", &ctx(&spec)).unwrap();
        assert_eq!(convergent_bounded(&spec, &q, &Cond::tt(), &Cond::tt(), 1000).unwrap(), Convergence::AllConverge);
    }

    #[test]
    fn witness_json_round_trip() {
        let spec = spec01();
        let c = |s: &str| parse_cond(s, &ctx(&spec)).unwrap();
        let j = Judgment::new(c("i = i~"), c("true"), c("true"), parse_proc("i := 1", &ctx(&spec)).unwrap(), c("i = 0"));
        let v = check_truth(&spec, &j, &TruthOptions::new(Mode::Partial, 4)).unwrap();
        let TruthVerdict::Refuted(w) = v else { panic!("{v}") };
        replay(&spec, &w).unwrap();
        let back = Witness::from_json(&spec, &w.to_json()).unwrap();
        assert_eq!(back, *w);
    }
}
