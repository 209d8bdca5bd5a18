//! Transition rules, successful termination, the step relation on closed
//! process/valuation pairs, head normal forms and data equivalence of actions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Mutex;

use crate::data::{DataSpec, Env2, EvalError, Value};
use crate::terms::*;

/// A single derivable transition `source --[rho]--alpha--> target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub source: Proc,
    pub rho: Valuation,
    pub action: AtomicAction,
    pub target: Proc,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} --[{}]--{}--> {}", self.source, self.rho, self.action, self.target)
    }
}

/// Step label: an atomic action of the process, or an environment step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Act(AtomicAction),
    Env,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Act(a) => write!(f, "{a}"),
            Label::Env => f.write_str("e"),
        }
    }
}

fn holds_rho(spec: &DataSpec, c: &Cond, rho: &Valuation) -> Result<bool, EvalError> {
    spec.holds(c, Env2::one(rho), &mut Vec::new())
}

fn value_of(spec: &DataSpec, e: &DataTerm, rho: &Valuation) -> Result<Value, EvalError> {
    spec.eval_data(e, Env2::one(rho), &[])
}

/// Synchronisation of two labels under `rho`, if any.
pub fn sync(spec: &DataSpec, a: &AtomicAction, b: &AtomicAction, rho: &Valuation) -> Result<Option<AtomicAction>, EvalError> {
    match (a, b) {
        (AtomicAction::Plain(x), AtomicAction::Plain(y)) => Ok(spec.gamma(x, y).map(AtomicAction::Plain)),
        (AtomicAction::Param(x, es), AtomicAction::Param(y, fs)) if es.len() == fs.len() => {
            let Some(c) = spec.gamma(x, y) else { return Ok(None) };
            for (e, f) in es.iter().zip(fs) {
                if value_of(spec, e, rho)? != value_of(spec, f, rho)? {
                    return Ok(None);
                }
            }
            Ok(Some(AtomicAction::Param(c, es.clone())))
        }
        _ => Ok(None),
    }
}

/// All `(alpha, t')` with `t --[rho]--alpha--> t'`, sorted and without duplicates.
pub fn transitions(spec: &DataSpec, t: &Proc, rho: &Valuation) -> Result<Vec<(AtomicAction, Proc)>, EvalError> {
    let mut out = BTreeSet::new();
    trans_into(spec, t, rho, &mut out)?;
    Ok(out.into_iter().collect())
}

fn trans_into(
    spec: &DataSpec,
    t: &Proc,
    rho: &Valuation,
    out: &mut BTreeSet<(AtomicAction, Proc)>,
) -> Result<(), EvalError> {
    match &**t {
        ProcTerm::Dead | ProcTerm::Empty => {}
        ProcTerm::Atom(a) => {
            out.insert((a.clone(), empty()));
        }
        ProcTerm::Alt(x, y) => {
            trans_into(spec, x, rho, out)?;
            trans_into(spec, y, rho, out)?;
        }
        ProcTerm::Seq(x, y) => {
            for (a, x2) in transitions(spec, x, rho)? {
                out.insert((a, seq(x2, y.clone())));
            }
            if terminates(spec, x, rho)? {
                trans_into(spec, y, rho, out)?;
            }
        }
        ProcTerm::Iter(x, y) => {
            trans_into(spec, y, rho, out)?;
            for (a, x2) in transitions(spec, x, rho)? {
                out.insert((a, seq(x2, t.clone())));
            }
        }
        ProcTerm::Par(x, y) => {
            let tx = transitions(spec, x, rho)?;
            let ty = transitions(spec, y, rho)?;
            for (a, x2) in &tx {
                out.insert((a.clone(), par(x2.clone(), y.clone())));
            }
            for (b, y2) in &ty {
                out.insert((b.clone(), par(x.clone(), y2.clone())));
            }
            sync_into(spec, &tx, &ty, rho, out)?;
        }
        ProcTerm::LeftMerge(x, y) => {
            for (a, x2) in transitions(spec, x, rho)? {
                out.insert((a, par(x2, y.clone())));
            }
        }
        ProcTerm::CommMerge(x, y) => {
            let tx = transitions(spec, x, rho)?;
            let ty = transitions(spec, y, rho)?;
            sync_into(spec, &tx, &ty, rho, out)?;
        }
        ProcTerm::Encap(h, x) => {
            for (a, x2) in transitions(spec, x, rho)? {
                if a.name().is_none_or(|n| !h.contains(n)) {
                    out.insert((a, encap(h.clone(), x2)));
                }
            }
        }
        ProcTerm::Guard(c, x) => {
            if holds_rho(spec, c, rho)? {
                trans_into(spec, x, rho, out)?;
            }
        }
        ProcTerm::Eval(sigma, x) => {
            for (a, x2) in transitions(spec, x, sigma)? {
                let (label, next) = eval_label(spec, &a, sigma)?;
                out.insert((label, eval(next, x2)));
            }
        }
    }
    Ok(())
}

fn sync_into(
    spec: &DataSpec,
    tx: &[(AtomicAction, Proc)],
    ty: &[(AtomicAction, Proc)],
    rho: &Valuation,
    out: &mut BTreeSet<(AtomicAction, Proc)>,
) -> Result<(), EvalError> {
    for (a, x2) in tx {
        for (b, y2) in ty {
            if let Some(c) = sync(spec, a, b, rho)? {
                out.insert((c, par(x2.clone(), y2.clone())));
            }
        }
    }
    Ok(())
}

/// The label of a transition of `x` seen through `eval_sigma(x)`, and the valuation carried afterwards.
fn eval_label(spec: &DataSpec, a: &AtomicAction, sigma: &Valuation) -> Result<(AtomicAction, Valuation), EvalError> {
    match a {
        AtomicAction::Plain(_) => Ok((a.clone(), sigma.clone())),
        AtomicAction::Param(n, es) => {
            let args = es
                .iter()
                .map(|e| value_of(spec, e, sigma).map(|v| DataSpec::literal(&v)))
                .collect::<Result<_, _>>()?;
            Ok((AtomicAction::Param(n.clone(), args), sigma.clone()))
        }
        AtomicAction::Assign(v, e) => {
            let n = spec.normalize(spec.eval_int(e, sigma)?)?;
            Ok((AtomicAction::Assign(v.clone(), DataTerm::Num(n)), sigma.updated(v, n)))
        }
    }
}

/// `t` can terminate successfully under `rho`.
pub fn terminates(spec: &DataSpec, t: &ProcTerm, rho: &Valuation) -> Result<bool, EvalError> {
    Ok(match t {
        ProcTerm::Empty => true,
        ProcTerm::Dead | ProcTerm::Atom(_) | ProcTerm::LeftMerge(..) | ProcTerm::CommMerge(..) => false,
        ProcTerm::Alt(x, y) => terminates(spec, x, rho)? || terminates(spec, y, rho)?,
        ProcTerm::Seq(x, y) | ProcTerm::Par(x, y) => terminates(spec, x, rho)? && terminates(spec, y, rho)?,
        ProcTerm::Iter(_, y) => terminates(spec, y, rho)?,
        ProcTerm::Encap(_, x) => terminates(spec, x, rho)?,
        ProcTerm::Guard(c, x) => holds_rho(spec, c, rho)? && terminates(spec, x, rho)?,
        ProcTerm::Eval(sigma, x) => terminates(spec, x, sigma)?,
    })
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum StepError {
    #[error("process is not an RG process term: {0}")]
    NotRg(String),
    #[error("unexpected transition target {0}")]
    Target(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `(p, rho) --alpha--> (p', rho')`: process steps of an RG term.
pub fn step(spec: &DataSpec, p: &Proc, rho: &Valuation) -> Result<Vec<(AtomicAction, Proc, Valuation)>, StepError> {
    if !p.is_rg() {
        return Err(StepError::NotRg(p.to_string()));
    }
    let base = spec.base_valuation();
    transitions(spec, &eval(rho.clone(), p.clone()), &base)?
        .into_iter()
        .map(|(a, t)| match &*t {
            ProcTerm::Eval(r2, p2) => Ok((a, p2.clone(), r2.clone())),
            _ => Err(StepError::Target(t.to_string())),
        })
        .collect()
}

/// The step relation with its universal quantifier over the outer valuation made explicit.
pub fn step_all_outer(spec: &DataSpec, p: &Proc, rho: &Valuation) -> Result<Vec<(AtomicAction, Proc, Valuation)>, StepError> {
    let t = eval(rho.clone(), p.clone());
    let mut common: Option<BTreeSet<(AtomicAction, Proc)>> = None;
    for outer in spec.valuations() {
        let here: BTreeSet<_> = transitions(spec, &t, &outer)?.into_iter().collect();
        common = Some(match common {
            None => here,
            Some(c) => c.intersection(&here).cloned().collect(),
        });
    }
    common
        .unwrap_or_default()
        .into_iter()
        .map(|(a, t)| match &*t {
            ProcTerm::Eval(r2, p2) => Ok((a, p2.clone(), r2.clone())),
            _ => Err(StepError::Target(t.to_string())),
        })
        .collect()
}

/// Terminates and cannot step: the state stands for the successfully terminated process.
pub fn is_terminal(spec: &DataSpec, p: &Proc, rho: &Valuation) -> Result<bool, StepError> {
    Ok(terminates(spec, p, rho)? && step(spec, p, rho)?.is_empty())
}

// ---------------------------------------------------------------------------
// Head normal forms

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Summand {
    Dead,
    Empty(Cond),
    Act(Cond, AtomicAction, Proc),
}

impl Summand {
    pub fn to_proc(&self) -> Proc {
        match self {
            Summand::Dead => dead(),
            Summand::Empty(c) => guard(c.clone(), empty()),
            Summand::Act(c, a, r) => guard(c.clone(), seq(atom(a.clone()), r.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf(pub Vec<Summand>);

impl Hnf {
    pub fn to_proc(&self) -> Proc {
        let mut it = self.0.iter().map(Summand::to_proc);
        let first = it.next().unwrap_or_else(dead);
        it.fold(first, alt)
    }
}

impl fmt::Display for Hnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_proc())
    }
}

/// Whether `t` is syntactically a head normal form.
pub fn is_hnf(t: &ProcTerm) -> bool {
    match t {
        ProcTerm::Dead => true,
        ProcTerm::Alt(x, y) => is_hnf(x) && is_hnf(y),
        ProcTerm::Guard(_, x) => match &**x {
            ProcTerm::Empty => true,
            ProcTerm::Seq(a, _) => matches!(**a, ProcTerm::Atom(_)),
            _ => false,
        },
        _ => false,
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum HnfError {
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn tidy(items: Vec<Summand>) -> Vec<Summand> {
    let mut out = Vec::with_capacity(items.len());
    let mut seen_dead = false;
    for s in items {
        if s == Summand::Dead {
            if seen_dead {
                continue;
            }
            seen_dead = true;
        }
        out.push(s);
    }
    if out.len() > 1 && out.iter().all(|s| *s == Summand::Dead) {
        out.truncate(1);
    }
    if out.is_empty() {
        out.push(Summand::Dead);
    }
    out
}

fn seq_simpl(r: Proc, y: Proc) -> Proc {
    if *r == ProcTerm::Empty {
        return y;
    }
    if *y == ProcTerm::Empty {
        return r;
    }
    seq(r, y)
}

/// Equational head normalisation.
pub fn hnf(spec: &DataSpec, p: &Proc) -> Result<Hnf, HnfError> {
    Ok(Hnf(tidy(hnf_list(spec, p)?)))
}

fn conj(spec: &DataSpec, phi: &Cond, psi: &Cond) -> Result<Option<Cond>, EvalError> {
    let c = if phi.is_true() {
        psi.clone()
    } else if psi.is_true() {
        phi.clone()
    } else {
        Cond::and(phi.clone(), psi.clone())
    };
    if c == Cond::False || (!c.is_true() && !spec.satisfiable(&c)?) {
        return Ok(None);
    }
    Ok(Some(c))
}

fn guard_all(spec: &DataSpec, phi: &Cond, items: Vec<Summand>) -> Result<Vec<Summand>, EvalError> {
    items
        .into_iter()
        .map(|s| {
            Ok(match s {
                Summand::Dead => Summand::Dead,
                Summand::Empty(psi) => conj(spec, phi, &psi)?.map_or(Summand::Dead, Summand::Empty),
                Summand::Act(psi, a, r) => conj(spec, phi, &psi)?.map_or(Summand::Dead, |c| Summand::Act(c, a, r)),
            })
        })
        .collect()
}

fn left_merge_list(hx: &[Summand], y: &Proc, x_on_right: Option<&Proc>) -> Vec<Summand> {
    hx.iter()
        .map(|s| match s {
            Summand::Act(c, a, r) => {
                let target = match x_on_right {
                    None => par(r.clone(), y.clone()),
                    Some(left) => par(left.clone(), r.clone()),
                };
                Summand::Act(c.clone(), a.clone(), target)
            }
            _ => Summand::Dead,
        })
        .collect()
}

fn comm_list(spec: &DataSpec, hx: &[Summand], hy: &[Summand]) -> Result<Vec<Summand>, EvalError> {
    let mut out = Vec::new();
    for s in hx {
        for t in hy {
            let (Summand::Act(c1, a, r), Summand::Act(c2, b, q)) = (s, t) else {
                out.push(Summand::Dead);
                continue;
            };
            let extra = match (a, b) {
                (AtomicAction::Plain(x), AtomicAction::Plain(y)) => spec.gamma(x, y).map(|c| (AtomicAction::Plain(c), Cond::tt())),
                (AtomicAction::Param(x, es), AtomicAction::Param(y, fs)) if es.len() == fs.len() => spec.gamma(x, y).map(|c| {
                    let eqs = Cond::and_all(es.iter().zip(fs).map(|(e, f)| Cond::eq(e.clone(), f.clone())));
                    (AtomicAction::Param(c, es.clone()), eqs)
                }),
                _ => None,
            };
            let Some((label, eqs)) = extra else {
                out.push(Summand::Dead);
                continue;
            };
            let g = match conj(spec, c1, c2)? {
                Some(g) => conj(spec, &g, &eqs)?,
                None => None,
            };
            out.push(g.map_or(Summand::Dead, |g| Summand::Act(g, label, par(r.clone(), q.clone()))));
        }
    }
    Ok(out)
}

fn termination_part(spec: &DataSpec, hx: &[Summand], hy: &[Summand]) -> Result<Vec<Summand>, EvalError> {
    let mut out = Vec::new();
    for s in hx {
        for t in hy {
            if let (Summand::Empty(c1), Summand::Empty(c2)) = (s, t) {
                out.push(conj(spec, c1, c2)?.map_or(Summand::Dead, Summand::Empty));
            }
        }
    }
    if out.is_empty() {
        out.push(Summand::Dead);
    }
    Ok(out)
}

fn hnf_list(spec: &DataSpec, p: &Proc) -> Result<Vec<Summand>, HnfError> {
    Ok(match &**p {
        ProcTerm::Dead => vec![Summand::Dead],
        ProcTerm::Empty => vec![Summand::Empty(Cond::tt())],
        ProcTerm::Atom(a) => vec![Summand::Act(Cond::tt(), a.clone(), empty())],
        ProcTerm::Alt(x, y) => {
            let mut l = hnf_list(spec, x)?;
            l.extend(hnf_list(spec, y)?);
            tidy(l)
        }
        ProcTerm::Seq(x, y) => {
            let mut out = Vec::new();
            let mut hy = None;
            for s in hnf_list(spec, x)? {
                match s {
                    Summand::Dead => out.push(Summand::Dead),
                    Summand::Empty(c) => {
                        if hy.is_none() {
                            hy = Some(hnf_list(spec, y)?);
                        }
                        out.extend(guard_all(spec, &c, hy.clone().unwrap_or_default())?);
                    }
                    Summand::Act(c, a, r) => out.push(Summand::Act(c, a, seq_simpl(r, y.clone()))),
                }
            }
            tidy(out)
        }
        ProcTerm::Iter(x, y) => {
            let mut out = Vec::new();
            for s in hnf_list(spec, x)? {
                match s {
                    Summand::Dead => out.push(Summand::Dead),
                    Summand::Empty(_) => {}
                    Summand::Act(c, a, r) => out.push(Summand::Act(c, a, seq_simpl(r, p.clone()))),
                }
            }
            out.extend(hnf_list(spec, y)?);
            tidy(out)
        }
        ProcTerm::Par(x, y) => {
            let (hx, hy) = (hnf_list(spec, x)?, hnf_list(spec, y)?);
            let mut out = left_merge_list(&hx, y, None);
            out.extend(left_merge_list(&hy, y, Some(x)));
            out.extend(comm_list(spec, &hx, &hy)?);
            out.extend(termination_part(spec, &hx, &hy)?);
            tidy(out)
        }
        ProcTerm::LeftMerge(x, y) => tidy(left_merge_list(&hnf_list(spec, x)?, y, None)),
        ProcTerm::CommMerge(x, y) => {
            let (hx, hy) = (hnf_list(spec, x)?, hnf_list(spec, y)?);
            tidy(comm_list(spec, &hx, &hy)?)
        }
        ProcTerm::Encap(h, x) => tidy(
            hnf_list(spec, x)?
                .into_iter()
                .map(|s| match s {
                    Summand::Act(_, ref a, _) if a.name().is_some_and(|n| h.contains(n)) => Summand::Dead,
                    Summand::Act(c, a, r) => Summand::Act(c, a, encap(h.clone(), r)),
                    other => other,
                })
                .collect(),
        ),
        ProcTerm::Guard(c, x) => {
            if *c == Cond::False {
                vec![Summand::Dead]
            } else {
                tidy(guard_all(spec, c, hnf_list(spec, x)?)?)
            }
        }
        ProcTerm::Eval(sigma, x) => {
            let mut out = Vec::new();
            for s in hnf_list(spec, x)? {
                out.push(match s {
                    Summand::Dead => Summand::Dead,
                    Summand::Empty(c) => {
                        if holds_rho(spec, &c, sigma)? {
                            Summand::Empty(Cond::tt())
                        } else {
                            Summand::Dead
                        }
                    }
                    Summand::Act(c, a, r) => {
                        if holds_rho(spec, &c, sigma)? {
                            let (label, next) = eval_label(spec, &a, sigma)?;
                            Summand::Act(Cond::tt(), label, eval(next, r))
                        } else {
                            Summand::Dead
                        }
                    }
                });
            }
            tidy(out)
        }
    })
}

/// Steps recovered from the summands `true :-> alpha . eval(rho', q')` of the normal form of `eval(rho, p)`.
pub fn steps_from_hnf(spec: &DataSpec, p: &Proc, rho: &Valuation) -> Result<Vec<(AtomicAction, Proc, Valuation)>, HnfError> {
    let h = hnf(spec, &eval(rho.clone(), p.clone()))?;
    let mut out = Vec::new();
    for s in h.0 {
        if let Summand::Act(c, a, r) = s {
            if c.is_true() {
                if let ProcTerm::Eval(r2, q) = &*r {
                    out.push((a, q.clone(), r2.clone()));
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Summands and canonical forms

fn flatten_alt<'a>(p: &'a Proc, out: &mut Vec<&'a Proc>) {
    if let ProcTerm::Alt(x, y) = &**p {
        flatten_alt(x, out);
        flatten_alt(y, out);
    } else {
        out.push(p);
    }
}

/// Maximal decomposition into alternatives, ordered by printed form.
pub fn summands(p: &Proc) -> Vec<Proc> {
    let mut leaves = Vec::new();
    flatten_alt(p, &mut leaves);
    let mut out: Vec<(String, Proc)> = leaves.into_iter().map(|t| (t.to_string(), t.clone())).collect();
    out.sort();
    out.into_iter().map(|(_, t)| t).collect()
}

/// `t` is a summand of `p` modulo associativity and commutativity of `+`.
pub fn is_summand(t: &Proc, p: &Proc) -> bool {
    let mut need = summands(t);
    let mut have = summands(p);
    need.sort();
    have.sort();
    let mut it = have.iter();
    need.iter().all(|n| it.any(|h| h == n))
}

/// Flattens, sorts and deduplicates alternatives at every depth.
pub fn canonical(p: &Proc) -> Proc {
    match &**p {
        ProcTerm::Dead | ProcTerm::Empty | ProcTerm::Atom(_) => p.clone(),
        ProcTerm::Alt(..) => {
            let mut leaves = Vec::new();
            flatten_alt(p, &mut leaves);
            let mut flat: Vec<Proc> = leaves.into_iter().map(canonical).collect();
            flat.sort();
            flat.dedup();
            let mut it = flat.into_iter();
            let first = it.next().unwrap_or_else(dead);
            it.fold(first, alt)
        }
        ProcTerm::Seq(x, y) => seq(canonical(x), canonical(y)),
        ProcTerm::Iter(x, y) => iter(canonical(x), canonical(y)),
        ProcTerm::Par(x, y) => par(canonical(x), canonical(y)),
        ProcTerm::LeftMerge(x, y) => left_merge(canonical(x), canonical(y)),
        ProcTerm::CommMerge(x, y) => comm_merge(canonical(x), canonical(y)),
        ProcTerm::Encap(h, x) => encap(h.clone(), canonical(x)),
        ProcTerm::Guard(c, x) => guard(c.clone(), canonical(x)),
        ProcTerm::Eval(r, x) => eval(r.clone(), canonical(x)),
    }
}

// ---------------------------------------------------------------------------
// Data equivalence

/// `alpha ≃ beta`, with a cache of decided data equalities.
#[derive(Debug, Default)]
pub struct ActionEquiv {
    cache: Mutex<BTreeMap<(DataTerm, DataTerm), bool>>,
}

impl ActionEquiv {
    pub fn new() -> Self {
        Self::default()
    }

    fn data_eq(&self, spec: &DataSpec, e: &DataTerm, f: &DataTerm) -> bool {
        if e == f {
            return true;
        }
        let key = if e <= f { (e.clone(), f.clone()) } else { (f.clone(), e.clone()) };
        if let Some(v) = self.cache.lock().map(|c| c.get(&key).copied()).ok().flatten() {
            return v;
        }
        let v = spec.valid(&Cond::eq(e.clone(), f.clone())).map(|r| r.is_valid()).unwrap_or(false);
        if let Ok(mut c) = self.cache.lock() {
            c.insert(key, v);
        }
        v
    }

    pub fn equiv(&self, spec: &DataSpec, a: &AtomicAction, b: &AtomicAction) -> bool {
        match (a, b) {
            (AtomicAction::Plain(x), AtomicAction::Plain(y)) => x == y,
            (AtomicAction::Param(x, es), AtomicAction::Param(y, fs)) => {
                x == y && es.len() == fs.len() && es.iter().zip(fs).all(|(e, f)| self.data_eq(spec, e, f))
            }
            (AtomicAction::Assign(v, e), AtomicAction::Assign(w, f)) => v == w && self.data_eq(spec, e, f),
            _ => false,
        }
    }
}

pub fn action_equiv(spec: &DataSpec, a: &AtomicAction, b: &AtomicAction) -> bool {
    ActionEquiv::new().equiv(spec, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_proc, ParseCtx};

    fn spec() -> DataSpec {
        DataSpec::default_spec()
    }

    fn p(s: &str) -> Proc {
        parse_proc(s, &ParseCtx::from_spec(&spec())).unwrap()
    }

    #[test]
    fn eval_assignment_transition() {
        let s = spec();
        let rho = Valuation::from_pairs([("i", 0), ("j", 0)]);
        let t = eval(rho, p("i := i + 1"));
        let tr = transitions(&s, &t, &s.base_valuation()).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr[0].0.to_string(), "i := 1");
        assert_eq!(tr[0].1.to_string(), "eval({i:1, j:0}, eps)");
    }

    #[test]
    fn parallel_with_sync() {
        let s = spec();
        let tr = transitions(&s, &p("a . eps || b . eps"), &s.base_valuation()).unwrap();
        let shown: Vec<String> = tr.iter().map(|(a, t)| format!("{a} {t}")).collect();
        assert_eq!(shown, vec!["a eps . eps || b . eps", "b a . eps || eps . eps", "c eps . eps || eps . eps"]);
    }

    #[test]
    fn termination_and_guards() {
        let s = spec();
        let r0 = Valuation::from_pairs([("i", 0), ("j", 0)]);
        let r1 = Valuation::from_pairs([("i", 1), ("j", 0)]);
        assert!(terminates(&s, &p("a . eps + eps"), &r0).unwrap());
        assert!(terminates(&s, &p("i = 0 :-> eps"), &r0).unwrap());
        assert!(!terminates(&s, &p("i = 0 :-> eps"), &r1).unwrap());
        assert!(step(&s, &p("(i > 0) :-> (i := 2)"), &r0).unwrap().is_empty());
        let st = step(&s, &p("i := 0"), &Valuation::from_pairs([("i", 2), ("j", 0)])).unwrap();
        assert_eq!(st, vec![(AtomicAction::assign("i", DataTerm::Num(0)), empty(), r0)]);
    }

    #[test]
    fn hnf_examples() {
        let s = spec();
        assert_eq!(hnf(&s, &p("delta")).unwrap().0, vec![Summand::Dead]);
        assert_eq!(hnf(&s, &p("eps")).unwrap().0, vec![Summand::Empty(Cond::tt())]);
        assert_eq!(hnf(&s, &p("a . eps + (false :-> b)")).unwrap().to_string(), "true :-> a . eps + delta");
        let h = hnf(&s, &p("(i := i+1) . (i := i+1) || (i := 0)")).unwrap();
        assert_eq!(h.0.len(), 3);
        assert!(is_hnf(&h.to_proc()));
    }

    #[test]
    fn summand_order() {
        let got: Vec<String> = summands(&p("(c + a) + b")).iter().map(|t| t.to_string()).collect();
        assert_eq!(got, vec!["a", "b", "c"]);
        assert!(is_summand(&p("b + c"), &p("(c + a) + b")));
        assert!(!is_summand(&p("b + b"), &p("(c + a) + b")));
    }

    #[test]
    fn data_equivalence() {
        let s = spec();
        let one = AtomicAction::assign("i", DataTerm::Num(1));
        let sum = AtomicAction::assign("i", DataTerm::add(DataTerm::Num(0), DataTerm::Num(1)));
        assert!(action_equiv(&s, &sum, &one));
        let a0 = AtomicAction::Param(ActName::new("a"), vec![DataTerm::Num(0)]);
        let b0 = AtomicAction::Param(ActName::new("b"), vec![DataTerm::Num(0)]);
        assert!(!action_equiv(&s, &a0, &b0));
        assert!(action_equiv(&s, &a0, &a0));
    }
}
