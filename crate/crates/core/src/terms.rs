//! Abstract syntax of process terms, conditions and data terms, with the
//! syntactic utilities used by the proof checker.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActName(Arc<str>);

impl ActName {
    pub fn new(name: &str) -> Self {
        ActName(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for ActName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ActName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sort {
    Proc,
    Cond,
    Data,
    Bool,
    Ord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OrdValue {
    Fin(u64),
    Omega,
}

impl fmt::Display for OrdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdValue::Fin(n) => write!(f, "{n}"),
            OrdValue::Omega => f.write_str("omega"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    /// `<` on Data or on Ord, result sort Bool.
    Lt,
    /// `ord : Data -> Ord`.
    Ord,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DataTerm {
    Bound(Var, Sort),
    Flex(Var),
    Prev(Var),
    Num(i64),
    Bit(bool),
    OrdLit(OrdValue),
    App(Op, Vec<DataTerm>),
}

impl DataTerm {
    pub fn flex(name: &str) -> Self {
        DataTerm::Flex(Var::new(name))
    }

    pub fn prev(name: &str) -> Self {
        DataTerm::Prev(Var::new(name))
    }

    pub fn bound(name: &str) -> Self {
        DataTerm::Bound(Var::new(name), Sort::Data)
    }

    pub fn bound_ord(name: &str) -> Self {
        DataTerm::Bound(Var::new(name), Sort::Ord)
    }

    pub fn add(a: DataTerm, b: DataTerm) -> Self {
        DataTerm::App(Op::Add, vec![a, b])
    }

    pub fn sub(a: DataTerm, b: DataTerm) -> Self {
        DataTerm::App(Op::Sub, vec![a, b])
    }

    pub fn mul(a: DataTerm, b: DataTerm) -> Self {
        DataTerm::App(Op::Mul, vec![a, b])
    }

    pub fn ord(a: DataTerm) -> Self {
        DataTerm::App(Op::Ord, vec![a])
    }

    pub fn sort(&self) -> Sort {
        match self {
            DataTerm::Bound(_, s) => *s,
            DataTerm::Flex(_) | DataTerm::Prev(_) | DataTerm::Num(_) => Sort::Data,
            DataTerm::Bit(_) => Sort::Bool,
            DataTerm::OrdLit(_) => Sort::Ord,
            DataTerm::App(op, _) => match op {
                Op::Add | Op::Sub | Op::Mul => Sort::Data,
                Op::Lt => Sort::Bool,
                Op::Ord => Sort::Ord,
            },
        }
    }

    pub fn has_prev(&self) -> bool {
        match self {
            DataTerm::Prev(_) => true,
            DataTerm::App(_, args) => args.iter().any(DataTerm::has_prev),
            _ => false,
        }
    }

    pub fn has_flex(&self) -> bool {
        match self {
            DataTerm::Flex(_) => true,
            DataTerm::App(_, args) => args.iter().any(DataTerm::has_flex),
            _ => false,
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            DataTerm::Flex(v) | DataTerm::Prev(v) => {
                out.insert(v.clone());
            }
            DataTerm::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    pub fn flex_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut BTreeSet<(Var, Sort)>) {
        match self {
            DataTerm::Bound(v, s) => {
                out.insert((v.clone(), *s));
            }
            DataTerm::App(_, args) => args.iter().for_each(|a| a.collect_bound(out)),
            _ => {}
        }
    }

    pub fn bound_vars(&self) -> BTreeSet<(Var, Sort)> {
        let mut out = BTreeSet::new();
        self.collect_bound(&mut out);
        out
    }

    /// Replaces every leaf for which `f` returns a term.
    pub fn map_leaves(&self, f: &dyn Fn(&DataTerm) -> Option<DataTerm>) -> DataTerm {
        if let Some(t) = f(self) {
            return t;
        }
        match self {
            DataTerm::App(op, args) => {
                DataTerm::App(*op, args.iter().map(|a| a.map_leaves(f)).collect())
            }
            other => other.clone(),
        }
    }

    pub fn subst_flex(&self, v: &Var, e: &DataTerm) -> DataTerm {
        self.map_leaves(&|t| match t {
            DataTerm::Flex(w) if w == v => Some(e.clone()),
            _ => None,
        })
    }

    /// `e⁻`: every flexible variable replaced by its previous-value constant.
    pub fn prev_of(&self) -> DataTerm {
        self.map_leaves(&|t| match t {
            DataTerm::Flex(w) => Some(DataTerm::Prev(w.clone())),
            _ => None,
        })
    }

    /// `ρ(e)`: flexible variables replaced by the numerals given by `rho`.
    pub fn apply_valuation(&self, rho: &Valuation) -> DataTerm {
        self.map_leaves(&|t| match t {
            DataTerm::Flex(w) => rho.get(w).map(DataTerm::Num),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cond {
    False,
    Eq(DataTerm, DataTerm),
    Not(Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
    Exists(Var, Sort, Box<Cond>),
}

impl Cond {
    pub fn tt() -> Cond {
        Cond::Not(Box::new(Cond::False))
    }

    pub fn eq(a: DataTerm, b: DataTerm) -> Cond {
        Cond::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Cond) -> Cond {
        Cond::Not(Box::new(c))
    }

    pub fn or(a: Cond, b: Cond) -> Cond {
        Cond::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Cond, b: Cond) -> Cond {
        Cond::not(Cond::or(Cond::not(a), Cond::not(b)))
    }

    pub fn implies(a: Cond, b: Cond) -> Cond {
        Cond::or(Cond::not(a), b)
    }

    pub fn iff(a: Cond, b: Cond) -> Cond {
        Cond::and(Cond::implies(a.clone(), b.clone()), Cond::implies(b, a))
    }

    pub fn exists(x: Var, sort: Sort, body: Cond) -> Cond {
        Cond::Exists(x, sort, Box::new(body))
    }

    pub fn forall(x: Var, sort: Sort, body: Cond) -> Cond {
        Cond::not(Cond::exists(x, sort, Cond::not(body)))
    }

    pub fn lt(a: DataTerm, b: DataTerm) -> Cond {
        Cond::Eq(DataTerm::App(Op::Lt, vec![a, b]), DataTerm::Bit(true))
    }

    pub fn le(a: DataTerm, b: DataTerm) -> Cond {
        Cond::or(Cond::lt(a.clone(), b.clone()), Cond::Eq(a, b))
    }

    pub fn ne(a: DataTerm, b: DataTerm) -> Cond {
        Cond::not(Cond::Eq(a, b))
    }

    pub fn and_all<I: IntoIterator<Item = Cond>>(items: I) -> Cond {
        let mut it = items.into_iter();
        match it.next() {
            None => Cond::tt(),
            Some(first) => it.fold(first, Cond::and),
        }
    }

    pub fn or_all<I: IntoIterator<Item = Cond>>(items: I) -> Cond {
        let mut it = items.into_iter();
        match it.next() {
            None => Cond::False,
            Some(first) => it.fold(first, Cond::or),
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Cond::Not(inner) if **inner == Cond::False)
    }

    pub fn as_and(&self) -> Option<(&Cond, &Cond)> {
        if let Cond::Not(inner) = self {
            if let Cond::Or(a, b) = &**inner {
                if let (Cond::Not(x), Cond::Not(y)) = (&**a, &**b) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn has_prev(&self) -> bool {
        match self {
            Cond::False => false,
            Cond::Eq(a, b) => a.has_prev() || b.has_prev(),
            Cond::Not(c) => c.has_prev(),
            Cond::Or(a, b) => a.has_prev() || b.has_prev(),
            Cond::Exists(_, _, c) => c.has_prev(),
        }
    }

    pub fn is_one_state(&self) -> bool {
        !self.has_prev()
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Cond::False => {}
            Cond::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Cond::Not(c) | Cond::Exists(_, _, c) => c.collect_vars(out),
            Cond::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn flex_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Flexible variables occurring in current-value form and in previous-value form.
    pub fn split_vars(&self) -> (BTreeSet<Var>, BTreeSet<Var>) {
        fn data(t: &DataTerm, cur: &mut BTreeSet<Var>, prev: &mut BTreeSet<Var>) {
            match t {
                DataTerm::Flex(v) => {
                    cur.insert(v.clone());
                }
                DataTerm::Prev(v) => {
                    prev.insert(v.clone());
                }
                DataTerm::App(_, args) => args.iter().for_each(|a| data(a, cur, prev)),
                _ => {}
            }
        }
        fn go(c: &Cond, cur: &mut BTreeSet<Var>, prev: &mut BTreeSet<Var>) {
            match c {
                Cond::False => {}
                Cond::Eq(a, b) => {
                    data(a, cur, prev);
                    data(b, cur, prev);
                }
                Cond::Not(c) | Cond::Exists(_, _, c) => go(c, cur, prev),
                Cond::Or(a, b) => {
                    go(a, cur, prev);
                    go(b, cur, prev);
                }
            }
        }
        let (mut cur, mut prev) = (BTreeSet::new(), BTreeSet::new());
        go(self, &mut cur, &mut prev);
        (cur, prev)
    }

    /// Free bound (logical) variables with their sorts.
    pub fn free_bound_vars(&self) -> BTreeSet<(Var, Sort)> {
        match self {
            Cond::False => BTreeSet::new(),
            Cond::Eq(a, b) => {
                let mut s = a.bound_vars();
                s.extend(b.bound_vars());
                s
            }
            Cond::Not(c) => c.free_bound_vars(),
            Cond::Or(a, b) => {
                let mut s = a.free_bound_vars();
                s.extend(b.free_bound_vars());
                s
            }
            Cond::Exists(x, _, c) => {
                let mut s = c.free_bound_vars();
                s.retain(|(y, _)| y != x);
                s
            }
        }
    }

    fn all_bound_names(&self, out: &mut BTreeSet<Var>) {
        match self {
            Cond::False => {}
            Cond::Eq(a, b) => {
                out.extend(a.bound_vars().into_iter().map(|(v, _)| v));
                out.extend(b.bound_vars().into_iter().map(|(v, _)| v));
            }
            Cond::Not(c) => c.all_bound_names(out),
            Cond::Or(a, b) => {
                a.all_bound_names(out);
                b.all_bound_names(out);
            }
            Cond::Exists(x, _, c) => {
                out.insert(x.clone());
                c.all_bound_names(out);
            }
        }
    }

    pub fn map_data(&self, f: &dyn Fn(&DataTerm) -> DataTerm) -> Cond {
        match self {
            Cond::False => Cond::False,
            Cond::Eq(a, b) => Cond::Eq(f(a), f(b)),
            Cond::Not(c) => Cond::not(c.map_data(f)),
            Cond::Or(a, b) => Cond::or(a.map_data(f), b.map_data(f)),
            Cond::Exists(x, s, c) => Cond::exists(x.clone(), *s, c.map_data(f)),
        }
    }

    /// `φ⁻`. Fails on a two-state condition.
    pub fn prev_of(&self) -> Result<Cond, TermError> {
        if self.has_prev() {
            return Err(TermError::AlreadyTwoState(self.to_string()));
        }
        Ok(self.map_data(&DataTerm::prev_of))
    }

    /// `ρ(φ)`.
    pub fn apply_valuation(&self, rho: &Valuation) -> Cond {
        self.map_data(&|t| t.apply_valuation(rho))
    }

    /// Substitutes `e` for the flexible variable `v`, renaming binders that would capture.
    pub fn subst_flex(&self, v: &Var, e: &DataTerm) -> Cond {
        let captured: BTreeSet<Var> = e.bound_vars().into_iter().map(|(x, _)| x).collect();
        self.subst_with(&captured, &|t| t.subst_flex(v, e))
    }

    /// Substitutes `e` for the free bound variable `x`.
    pub fn subst_bound(&self, x: &Var, e: &DataTerm) -> Cond {
        let captured: BTreeSet<Var> = e.bound_vars().into_iter().map(|(y, _)| y).collect();
        match self {
            Cond::False => Cond::False,
            Cond::Eq(a, b) => Cond::Eq(subst_bound_data(a, x, e), subst_bound_data(b, x, e)),
            Cond::Not(c) => Cond::not(c.subst_bound(x, e)),
            Cond::Or(a, b) => Cond::or(a.subst_bound(x, e), b.subst_bound(x, e)),
            Cond::Exists(y, s, body) => {
                if y == x {
                    return self.clone();
                }
                if captured.contains(y) {
                    let mut avoid = captured.clone();
                    body.all_bound_names(&mut avoid);
                    avoid.insert(x.clone());
                    let fresh = fresh_name(y, &avoid);
                    let renamed = body.subst_bound(y, &DataTerm::Bound(fresh.clone(), *s));
                    Cond::exists(fresh, *s, renamed.subst_bound(x, e))
                } else {
                    Cond::exists(y.clone(), *s, body.subst_bound(x, e))
                }
            }
        }
    }

    fn subst_with(&self, captured: &BTreeSet<Var>, f: &dyn Fn(&DataTerm) -> DataTerm) -> Cond {
        match self {
            Cond::False => Cond::False,
            Cond::Eq(a, b) => Cond::Eq(f(a), f(b)),
            Cond::Not(c) => Cond::not(c.subst_with(captured, f)),
            Cond::Or(a, b) => Cond::or(a.subst_with(captured, f), b.subst_with(captured, f)),
            Cond::Exists(y, s, body) => {
                if captured.contains(y) {
                    let mut avoid = captured.clone();
                    body.all_bound_names(&mut avoid);
                    let fresh = fresh_name(y, &avoid);
                    let renamed = body.subst_bound(y, &DataTerm::Bound(fresh.clone(), *s));
                    Cond::exists(fresh, *s, renamed.subst_with(captured, f))
                } else {
                    Cond::exists(y.clone(), *s, body.subst_with(captured, f))
                }
            }
        }
    }

    /// Names of all binders and bound variables, free or not.
    pub fn bound_names(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.all_bound_names(&mut out);
        out
    }
}

fn subst_bound_data(t: &DataTerm, x: &Var, e: &DataTerm) -> DataTerm {
    t.map_leaves(&|leaf| match leaf {
        DataTerm::Bound(y, _) if y == x => Some(e.clone()),
        _ => None,
    })
}

/// A name based on `base` that is not in `avoid`.
pub fn fresh_name(base: &Var, avoid: &BTreeSet<Var>) -> Var {
    let mut candidate = format!("{}'", base.as_str());
    while avoid.contains(&Var::new(&candidate)) {
        candidate.push('\'');
    }
    Var::new(&candidate)
}

/// `unch(V)`: the conjunction of `v = v~` over `V` in name order.
pub fn unch<'a, I: IntoIterator<Item = &'a Var>>(vars: I) -> Cond {
    let set: BTreeSet<&Var> = vars.into_iter().collect();
    Cond::and_all(
        set.into_iter()
            .map(|v| Cond::Eq(DataTerm::Flex(v.clone()), DataTerm::Prev(v.clone()))),
    )
}

/// `FVar(Φ)`.
pub fn fvar<'a, I: IntoIterator<Item = &'a Cond>>(conds: I) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for c in conds {
        c.collect_vars(&mut out);
    }
    out
}

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(pub BTreeMap<Var, i64>);

impl Valuation {
    pub fn new() -> Self {
        Valuation(BTreeMap::new())
    }

    pub fn from_pairs<'a, I: IntoIterator<Item = (&'a str, i64)>>(pairs: I) -> Self {
        Valuation(pairs.into_iter().map(|(k, v)| (Var::new(k), v)).collect())
    }

    pub fn get(&self, v: &Var) -> Option<i64> {
        self.0.get(v).copied()
    }

    pub fn set(&mut self, v: Var, value: i64) {
        self.0.insert(v, value);
    }

    pub fn updated(&self, v: &Var, value: i64) -> Valuation {
        let mut out = self.clone();
        out.0.insert(v.clone(), value);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &i64)> {
        self.0.iter()
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (v, n)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{n}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomicAction {
    Plain(ActName),
    Param(ActName, Vec<DataTerm>),
    Assign(Var, DataTerm),
}

impl AtomicAction {
    pub fn plain(name: &str) -> Self {
        AtomicAction::Plain(ActName::new(name))
    }

    pub fn assign(v: &str, e: DataTerm) -> Self {
        AtomicAction::Assign(Var::new(v), e)
    }

    pub fn name(&self) -> Option<&ActName> {
        match self {
            AtomicAction::Plain(a) | AtomicAction::Param(a, _) => Some(a),
            AtomicAction::Assign(..) => None,
        }
    }

    pub fn is_assignment(&self) -> bool {
        matches!(self, AtomicAction::Assign(..))
    }

    pub fn apply_valuation(&self, rho: &Valuation) -> AtomicAction {
        match self {
            AtomicAction::Plain(_) => self.clone(),
            AtomicAction::Param(a, args) => AtomicAction::Param(
                a.clone(),
                args.iter().map(|e| e.apply_valuation(rho)).collect(),
            ),
            AtomicAction::Assign(v, e) => AtomicAction::Assign(v.clone(), e.apply_valuation(rho)),
        }
    }
}

pub type Proc = Arc<ProcTerm>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcTerm {
    Dead,
    Empty,
    Atom(AtomicAction),
    Alt(Proc, Proc),
    Seq(Proc, Proc),
    Iter(Proc, Proc),
    Par(Proc, Proc),
    LeftMerge(Proc, Proc),
    CommMerge(Proc, Proc),
    Encap(BTreeSet<ActName>, Proc),
    Guard(Cond, Proc),
    Eval(Valuation, Proc),
}

pub fn dead() -> Proc {
    Arc::new(ProcTerm::Dead)
}

pub fn empty() -> Proc {
    Arc::new(ProcTerm::Empty)
}

pub fn atom(a: AtomicAction) -> Proc {
    Arc::new(ProcTerm::Atom(a))
}

pub fn act(name: &str) -> Proc {
    atom(AtomicAction::plain(name))
}

pub fn assign(v: &str, e: DataTerm) -> Proc {
    atom(AtomicAction::assign(v, e))
}

pub fn alt(p: Proc, q: Proc) -> Proc {
    Arc::new(ProcTerm::Alt(p, q))
}

pub fn seq(p: Proc, q: Proc) -> Proc {
    Arc::new(ProcTerm::Seq(p, q))
}

pub fn iter(p: Proc, q: Proc) -> Proc {
    Arc::new(ProcTerm::Iter(p, q))
}

pub fn par(p: Proc, q: Proc) -> Proc {
    Arc::new(ProcTerm::Par(p, q))
}

pub fn left_merge(p: Proc, q: Proc) -> Proc {
    Arc::new(ProcTerm::LeftMerge(p, q))
}

pub fn comm_merge(p: Proc, q: Proc) -> Proc {
    Arc::new(ProcTerm::CommMerge(p, q))
}

pub fn encap(h: BTreeSet<ActName>, p: Proc) -> Proc {
    Arc::new(ProcTerm::Encap(h, p))
}

pub fn guard(c: Cond, p: Proc) -> Proc {
    Arc::new(ProcTerm::Guard(c, p))
}

pub fn eval(rho: Valuation, p: Proc) -> Proc {
    Arc::new(ProcTerm::Eval(rho, p))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("condition is already two-state: {0}")]
    AlreadyTwoState(String),
    #[error("{0:?} is not a set of auxiliary variables of the process")]
    NotAuxiliary(Vec<Var>),
}

impl ProcTerm {
    pub fn children(&self) -> Vec<&Proc> {
        match self {
            ProcTerm::Dead | ProcTerm::Empty | ProcTerm::Atom(_) => vec![],
            ProcTerm::Alt(p, q)
            | ProcTerm::Seq(p, q)
            | ProcTerm::Iter(p, q)
            | ProcTerm::Par(p, q)
            | ProcTerm::LeftMerge(p, q)
            | ProcTerm::CommMerge(p, q) => vec![p, q],
            ProcTerm::Encap(_, p) | ProcTerm::Guard(_, p) | ProcTerm::Eval(_, p) => vec![p],
        }
    }

    /// Member of P_RG: no evaluation, left merge or communication merge.
    pub fn is_rg(&self) -> bool {
        match self {
            ProcTerm::Eval(..) | ProcTerm::LeftMerge(..) | ProcTerm::CommMerge(..) => false,
            other => other.children().into_iter().all(|c| c.is_rg()),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn atoms(&self) -> Vec<AtomicAction> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let ProcTerm::Atom(a) = t {
                out.push(a.clone());
            }
        });
        out
    }

    pub fn visit(&self, f: &mut dyn FnMut(&ProcTerm)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Names of the basic actions occurring in the term.
    pub fn action_names(&self) -> BTreeSet<ActName> {
        self.atoms().iter().filter_map(|a| a.name().cloned()).collect()
    }

    /// Flexible variables occurring anywhere in the term.
    pub fn flex_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            ProcTerm::Atom(AtomicAction::Param(_, args)) => {
                args.iter().for_each(|a| a.collect_vars(&mut out))
            }
            ProcTerm::Atom(AtomicAction::Assign(v, e)) => {
                out.insert(v.clone());
                e.collect_vars(&mut out);
            }
            ProcTerm::Guard(c, _) => c.collect_vars(&mut out),
            _ => {}
        });
        out
    }

    /// Whether every variable of `a` occurs only inside assignments whose target is in `a`.
    pub fn is_aux_set(&self, a: &BTreeSet<Var>) -> bool {
        let occurring = self.flex_vars();
        if !a.iter().all(|v| occurring.contains(v)) {
            return false;
        }
        let mut ok = true;
        self.visit(&mut |t| match t {
            ProcTerm::Atom(AtomicAction::Param(_, args)) => {
                if args.iter().any(|e| e.flex_vars().iter().any(|v| a.contains(v))) {
                    ok = false;
                }
            }
            ProcTerm::Atom(AtomicAction::Assign(v, e)) => {
                if !a.contains(v) && e.flex_vars().iter().any(|w| a.contains(w)) {
                    ok = false;
                }
            }
            ProcTerm::Guard(c, _) => {
                if c.flex_vars().iter().any(|v| a.contains(v)) {
                    ok = false;
                }
            }
            _ => {}
        });
        ok
    }

    /// `AVars(p)`.
    pub fn aux_sets(&self) -> BTreeSet<BTreeSet<Var>> {
        let vars: Vec<Var> = self.flex_vars().into_iter().collect();
        let mut out = BTreeSet::new();
        for mask in 0u64..(1u64 << vars.len()) {
            let a: BTreeSet<Var> = vars
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, v)| v.clone())
                .collect();
            if self.is_aux_set(&a) {
                out.insert(a);
            }
        }
        out
    }

    /// `p_A`: assignments to members of `a` replaced by the empty process.
    pub fn erase_aux(self: &Proc, a: &BTreeSet<Var>) -> Result<Proc, TermError> {
        if !self.is_aux_set(a) {
            return Err(TermError::NotAuxiliary(a.iter().cloned().collect()));
        }
        Ok(erase(self, a))
    }
}

fn erase(p: &Proc, a: &BTreeSet<Var>) -> Proc {
    match &**p {
        ProcTerm::Atom(AtomicAction::Assign(v, _)) if a.contains(v) => empty(),
        ProcTerm::Dead | ProcTerm::Empty | ProcTerm::Atom(_) => p.clone(),
        ProcTerm::Alt(x, y) => alt(erase(x, a), erase(y, a)),
        ProcTerm::Seq(x, y) => seq(erase(x, a), erase(y, a)),
        ProcTerm::Iter(x, y) => iter(erase(x, a), erase(y, a)),
        ProcTerm::Par(x, y) => par(erase(x, a), erase(y, a)),
        ProcTerm::LeftMerge(x, y) => left_merge(erase(x, a), erase(y, a)),
        ProcTerm::CommMerge(x, y) => comm_merge(erase(x, a), erase(y, a)),
        ProcTerm::Encap(h, x) => encap(h.clone(), erase(x, a)),
        ProcTerm::Guard(c, x) => guard(c.clone(), erase(x, a)),
        ProcTerm::Eval(r, x) => eval(r.clone(), erase(x, a)),
    }
}

/// `φ_A`: every `v ∈ A` (current and previous form) replaced by a fresh bound
/// variable, existentially quantified.
pub fn exists_closure(phi: &Cond, a: &BTreeSet<Var>) -> Cond {
    let mut avoid = phi.bound_names();
    let mut out = phi.clone();
    let mut binders = Vec::new();
    for v in a.iter().rev() {
        let (cur, prev) = out.split_vars();
        if cur.contains(v) {
            let x = fresh_name(&Var::new(&format!("{}_aux", v.as_str())), &avoid);
            avoid.insert(x.clone());
            let bx = DataTerm::Bound(x.clone(), Sort::Data);
            out = out.map_data(&|t| {
                t.map_leaves(&|l| match l {
                    DataTerm::Flex(w) if w == v => Some(bx.clone()),
                    _ => None,
                })
            });
            binders.push(x);
        }
        if prev.contains(v) {
            let x = fresh_name(&Var::new(&format!("{}_aux_prev", v.as_str())), &avoid);
            avoid.insert(x.clone());
            let bx = DataTerm::Bound(x.clone(), Sort::Data);
            out = out.map_data(&|t| {
                t.map_leaves(&|l| match l {
                    DataTerm::Prev(w) if w == v => Some(bx.clone()),
                    _ => None,
                })
            });
            binders.push(x);
        }
    }
    for x in binders.into_iter().rev() {
        out = Cond::exists(x, Sort::Data, out);
    }
    out
}

// ---------------------------------------------------------------------------
// Printing

fn write_data(f: &mut fmt::Formatter<'_>, t: &DataTerm, level: u8) -> fmt::Result {
    // level 0: additive, 1: multiplicative operand, 2: atom
    match t {
        DataTerm::Bound(v, _) | DataTerm::Flex(v) => write!(f, "{v}"),
        DataTerm::Prev(v) => write!(f, "{v}~"),
        DataTerm::Num(n) => {
            if *n < 0 && level >= 2 {
                write!(f, "({n})")
            } else {
                write!(f, "{n}")
            }
        }
        DataTerm::Bit(b) => write!(f, "{}", if *b { "1b" } else { "0b" }),
        DataTerm::OrdLit(o) => write!(f, "{o}"),
        DataTerm::App(op, args) => match op {
            Op::Add | Op::Sub => {
                let sym = if *op == Op::Add { "+" } else { "-" };
                if level > 0 {
                    f.write_str("(")?;
                }
                write_data(f, &args[0], 0)?;
                write!(f, " {sym} ")?;
                write_data(f, &args[1], 1)?;
                if level > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Op::Mul => {
                if level > 1 {
                    f.write_str("(")?;
                }
                write_data(f, &args[0], 1)?;
                f.write_str(" * ")?;
                write_data(f, &args[1], 2)?;
                if level > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Op::Ord => {
                f.write_str("ord(")?;
                write_data(f, &args[0], 0)?;
                f.write_str(")")
            }
            Op::Lt => {
                f.write_str("lt(")?;
                write_data(f, &args[0], 0)?;
                f.write_str(", ")?;
                write_data(f, &args[1], 0)?;
                f.write_str(")")
            }
        },
    }
}

impl fmt::Display for DataTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_data(f, self, 0)
    }
}

fn as_lt(c: &Cond) -> Option<(&DataTerm, &DataTerm)> {
    if let Cond::Eq(DataTerm::App(Op::Lt, args), DataTerm::Bit(true)) = c {
        if args.len() == 2 {
            return Some((&args[0], &args[1]));
        }
    }
    None
}

fn as_le(c: &Cond) -> Option<(&DataTerm, &DataTerm)> {
    if let Cond::Or(a, b) = c {
        if let (Some((x, y)), Cond::Eq(u, v)) = (as_lt(a), &**b) {
            if x == u && y == v {
                return Some((x, y));
            }
        }
    }
    None
}

fn write_binder(f: &mut fmt::Formatter<'_>, kw: &str, x: &Var, s: Sort) -> fmt::Result {
    if s == Sort::Ord {
        write!(f, "{kw} {x}:ord . ")
    } else {
        write!(f, "{kw} {x} . ")
    }
}

// Condition levels: 0 quantifier / implication, 1 or, 2 and, 3 not, 4 atom.
fn write_cond(f: &mut fmt::Formatter<'_>, c: &Cond, level: u8) -> fmt::Result {
    let paren = |f: &mut fmt::Formatter<'_>, mine: u8, body: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result| {
        if level > mine {
            f.write_str("(")?;
            body(f)?;
            f.write_str(")")
        } else {
            body(f)
        }
    };
    if c.is_true() {
        return f.write_str("true");
    }
    if let Some((a, b)) = c.as_and() {
        return paren(f, 2, &|f| {
            write_cond(f, a, 2)?;
            f.write_str(" and ")?;
            write_cond(f, b, 3)
        });
    }
    if let Some((x, y)) = as_lt(c) {
        return paren(f, 4, &|f| {
            write_data(f, x, 0)?;
            f.write_str(" < ")?;
            write_data(f, y, 0)
        });
    }
    if let Some((x, y)) = as_le(c) {
        return paren(f, 4, &|f| {
            write_data(f, x, 0)?;
            f.write_str(" <= ")?;
            write_data(f, y, 0)
        });
    }
    match c {
        Cond::False => f.write_str("false"),
        Cond::Eq(a, b) => paren(f, 4, &|f| {
            write_data(f, a, 0)?;
            f.write_str(" = ")?;
            write_data(f, b, 0)
        }),
        Cond::Not(inner) => {
            if let Cond::Exists(x, s, body) = &**inner {
                if let Cond::Not(b) = &**body {
                    return paren(f, 0, &|f| {
                        write_binder(f, "forall", x, *s)?;
                        write_cond(f, b, 0)
                    });
                }
            }
            if let Some((x, y)) = as_lt(inner) {
                return paren(f, 4, &|f| {
                    write_data(f, x, 0)?;
                    f.write_str(" >= ")?;
                    write_data(f, y, 0)
                });
            }
            if let Cond::Eq(x, y) = &**inner {
                return paren(f, 4, &|f| {
                    write_data(f, x, 0)?;
                    f.write_str(" != ")?;
                    write_data(f, y, 0)
                });
            }
            paren(f, 3, &|f| {
                f.write_str("not ")?;
                write_cond(f, inner, 3)
            })
        }
        Cond::Or(a, b) => {
            if let (Cond::Not(na), false) = (&**a, a.is_true()) {
                return paren(f, 0, &|f| {
                    write_cond(f, na, 1)?;
                    f.write_str(" => ")?;
                    write_cond(f, b, 0)
                });
            }
            paren(f, 1, &|f| {
                write_cond(f, a, 1)?;
                f.write_str(" or ")?;
                write_cond(f, b, 2)
            })
        }
        Cond::Exists(x, s, body) => paren(f, 0, &|f| {
            write_binder(f, "exists", x, *s)?;
            write_cond(f, body, 0)
        }),
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cond(f, self, 0)
    }
}

impl fmt::Display for AtomicAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomicAction::Plain(a) => write!(f, "{a}"),
            AtomicAction::Param(a, args) => {
                write!(f, "{a}(")?;
                for (k, e) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write_data(f, e, 0)?;
                }
                f.write_str(")")
            }
            AtomicAction::Assign(v, e) => {
                write!(f, "{v} := ")?;
                write_data(f, e, 0)
            }
        }
    }
}

fn group_op(t: &ProcTerm) -> Option<&'static str> {
    match t {
        ProcTerm::Iter(..) => Some("*"),
        ProcTerm::Par(..) => Some("||"),
        ProcTerm::LeftMerge(..) => Some("||_"),
        ProcTerm::CommMerge(..) => Some("|"),
        _ => None,
    }
}

// Process levels: 0 alternative, 1 group operators and guards, 2 sequential, 3 atom.
fn write_proc(f: &mut fmt::Formatter<'_>, p: &ProcTerm, level: u8, operand: bool) -> fmt::Result {
    let open = |f: &mut fmt::Formatter<'_>, need: bool| if need { f.write_str("(") } else { Ok(()) };
    let close = |f: &mut fmt::Formatter<'_>, need: bool| if need { f.write_str(")") } else { Ok(()) };
    match p {
        ProcTerm::Dead => f.write_str("delta"),
        ProcTerm::Empty => f.write_str("eps"),
        ProcTerm::Atom(a @ AtomicAction::Assign(..)) => {
            open(f, operand)?;
            write!(f, "{a}")?;
            close(f, operand)
        }
        ProcTerm::Atom(a) => write!(f, "{a}"),
        ProcTerm::Alt(x, y) => {
            let need = level > 0;
            open(f, need)?;
            write_proc(f, x, 0, true)?;
            f.write_str(" + ")?;
            write_proc(f, y, 1, true)?;
            close(f, need)
        }
        ProcTerm::Iter(x, y) | ProcTerm::Par(x, y) | ProcTerm::LeftMerge(x, y) | ProcTerm::CommMerge(x, y) => {
            let op = group_op(p).unwrap_or("?");
            let need = level > 1;
            open(f, need)?;
            if group_op(x) == Some(op) {
                write_proc(f, x, 1, true)?;
            } else {
                write_proc(f, x, 2, true)?;
            }
            write!(f, " {op} ")?;
            write_proc(f, y, 2, true)?;
            close(f, need)
        }
        ProcTerm::Guard(c, x) => {
            let need = level > 0;
            open(f, need)?;
            write_cond(f, c, 0)?;
            f.write_str(" :-> ")?;
            write_proc(f, x, 2, true)?;
            close(f, need)
        }
        ProcTerm::Seq(x, y) => {
            let need = level > 2;
            open(f, need)?;
            write_proc(f, x, 2, true)?;
            f.write_str(" . ")?;
            write_proc(f, y, 3, true)?;
            close(f, need)
        }
        ProcTerm::Encap(h, x) => {
            f.write_str("encap({")?;
            for (k, a) in h.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str("}, ")?;
            write_proc(f, x, 0, false)?;
            f.write_str(")")
        }
        ProcTerm::Eval(rho, x) => {
            write!(f, "eval({rho}, ")?;
            write_proc(f, x, 0, false)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for ProcTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_proc(f, self, 0, false)
    }
}
