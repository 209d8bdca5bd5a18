//! Finite model of the data algebra: evaluation of data terms, satisfaction
//! and validity of one- and two-state conditions, and the ordinal sort.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::terms::{ActName, Cond, DataTerm, Op, OrdValue, Sort, Var, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Overflow {
    #[default]
    Saturate,
    Wrap,
    Error,
}

impl fmt::Display for Overflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Overflow::Saturate => "saturate",
            Overflow::Wrap => "wrap",
            Overflow::Error => "error",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("cannot read data spec: {0}")]
    Toml(String),
    #[error("empty domain [{0}, {1}]")]
    EmptyDomain(i64, i64),
    #[error("communication entry mentions undeclared action `{0}`")]
    UnknownAction(String),
    #[error("communication function is not well defined on ({0}, {1})")]
    Conflict(String, String),
    #[error("communication function is not associative on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("flexible variable `{0}` declared twice")]
    DuplicateVar(String),
    #[error("name `{0}` is reserved")]
    Reserved(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("value {0} lies outside the domain [{1}, {2}]")]
    Overflow(i64, i64, i64),
    #[error("arithmetic overflow")]
    Arithmetic,
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("flexible variable `{0}` has no value")]
    NoValue(String),
    #[error("ordinal sort used but the ordinal extension is disabled")]
    OrdinalDisabled,
    #[error("sort mismatch in `{0}`")]
    SortMismatch(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    actions: Vec<String>,
    flex_vars: Vec<String>,
    domain: [i64; 2],
    #[serde(default)]
    overflow: Overflow,
    #[serde(default)]
    ordinal: bool,
    #[serde(default)]
    comm: Vec<[String; 3]>,
}

const RESERVED: &[&str] = &[
    "delta", "eps", "true", "false", "not", "or", "and", "exists", "forall", "encap", "eval",
    "omega", "ord",
];

/// Actions, communication function, flexible variables and the finite data domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataSpec {
    pub actions: BTreeSet<ActName>,
    comm: BTreeMap<(ActName, ActName), ActName>,
    pub flex_vars: Vec<Var>,
    pub lo: i64,
    pub hi: i64,
    pub overflow: Overflow,
    pub ordinal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Ord(OrdValue),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{}", u8::from(*b)),
            Value::Ord(o) => write!(f, "{o}"),
        }
    }
}

/// Pair of valuations used to evaluate two-state conditions: `cur` gives `v`, `prev` gives `v~`.
#[derive(Clone, Copy, Debug)]
pub struct Env2<'a> {
    pub cur: &'a Valuation,
    pub prev: &'a Valuation,
}

impl<'a> Env2<'a> {
    pub fn one(rho: &'a Valuation) -> Self {
        Env2 { cur: rho, prev: rho }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub cur: Valuation,
    pub prev: Valuation,
    pub binding: Vec<(Var, String)>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cur={} prev={}", self.cur, self.prev)?;
        for (x, v) in &self.binding {
            write!(f, " {x}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(Counterexample),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

type Binding = Vec<(Var, Value)>;

impl DataSpec {
    pub fn new(
        actions: &[&str],
        comm: &[(&str, &str, &str)],
        flex_vars: &[&str],
        lo: i64,
        hi: i64,
    ) -> Result<Self, SpecError> {
        Self::build(
            actions.iter().map(|s| s.to_string()).collect(),
            comm.iter()
                .map(|(a, b, c)| [a.to_string(), b.to_string(), c.to_string()])
                .collect(),
            flex_vars.iter().map(|s| s.to_string()).collect(),
            lo,
            hi,
            Overflow::Saturate,
            true,
        )
    }

    /// Actions `a, b, c` with `a | b = c`, variables `i, j`, domain `[-1, 3]`.
    pub fn default_spec() -> Self {
        Self::new(&["a", "b", "c"], &[("a", "b", "c")], &["i", "j"], -1, 3)
            .expect("built-in spec is well formed")
    }

    pub fn with_domain(&self, lo: i64, hi: i64) -> Result<Self, SpecError> {
        if lo > hi {
            return Err(SpecError::EmptyDomain(lo, hi));
        }
        Ok(DataSpec { lo, hi, ..self.clone() })
    }

    pub fn with_overflow(&self, overflow: Overflow) -> Self {
        DataSpec { overflow, ..self.clone() }
    }

    pub fn with_ordinal(&self, ordinal: bool) -> Self {
        DataSpec { ordinal, ..self.clone() }
    }

    pub fn from_toml(text: &str) -> Result<Self, SpecError> {
        let file: SpecFile = toml::from_str(text).map_err(|e| SpecError::Toml(e.to_string()))?;
        Self::build(
            file.actions,
            file.comm,
            file.flex_vars,
            file.domain[0],
            file.domain[1],
            file.overflow,
            file.ordinal,
        )
    }

    fn build(
        actions: Vec<String>,
        comm: Vec<[String; 3]>,
        flex_vars: Vec<String>,
        lo: i64,
        hi: i64,
        overflow: Overflow,
        ordinal: bool,
    ) -> Result<Self, SpecError> {
        if lo > hi {
            return Err(SpecError::EmptyDomain(lo, hi));
        }
        for name in actions.iter().chain(flex_vars.iter()) {
            if RESERVED.contains(&name.as_str()) {
                return Err(SpecError::Reserved(name.clone()));
            }
        }
        let acts: BTreeSet<ActName> = actions.iter().map(|a| ActName::new(a)).collect();
        let mut vars = Vec::new();
        for v in &flex_vars {
            let var = Var::new(v);
            if vars.contains(&var) || acts.contains(&ActName::new(v)) {
                return Err(SpecError::DuplicateVar(v.clone()));
            }
            vars.push(var);
        }
        vars.sort();
        let mut table = BTreeMap::new();
        for [a, b, c] in &comm {
            for n in [a, b, c] {
                if !acts.contains(&ActName::new(n)) {
                    return Err(SpecError::UnknownAction(n.clone()));
                }
            }
            let (a, b, c) = (ActName::new(a), ActName::new(b), ActName::new(c));
            for key in [(a.clone(), b.clone()), (b.clone(), a.clone())] {
                if let Some(old) = table.insert(key.clone(), c.clone()) {
                    if old != c {
                        return Err(SpecError::Conflict(key.0.to_string(), key.1.to_string()));
                    }
                }
            }
        }
        let spec = DataSpec { actions: acts, comm: table, flex_vars: vars, lo, hi, overflow, ordinal };
        spec.check_gamma()?;
        Ok(spec)
    }

    fn check_gamma(&self) -> Result<(), SpecError> {
        let all: Vec<Option<ActName>> =
            std::iter::once(None).chain(self.actions.iter().cloned().map(Some)).collect();
        let g = |x: &Option<ActName>, y: &Option<ActName>| match (x, y) {
            (Some(a), Some(b)) => self.gamma(a, b),
            _ => None,
        };
        for x in &all {
            for y in &all {
                if g(x, y) != g(y, x) {
                    let name = |o: &Option<ActName>| o.as_ref().map_or("delta".into(), |a| a.to_string());
                    return Err(SpecError::Conflict(name(x), name(y)));
                }
                for z in &all {
                    if g(&g(x, y), z) != g(x, &g(y, z)) {
                        let name = |o: &Option<ActName>| o.as_ref().map_or("delta".into(), |a| a.to_string());
                        return Err(SpecError::NotAssociative(name(x), name(y), name(z)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `γ(a, b)`, `None` standing for `δ`.
    pub fn gamma(&self, a: &ActName, b: &ActName) -> Option<ActName> {
        self.comm.get(&(a.clone(), b.clone())).cloned()
    }

    pub fn comm_triples(&self) -> Vec<(ActName, ActName, ActName)> {
        self.comm
            .iter()
            .filter(|((a, b), _)| a <= b)
            .map(|((a, b), c)| (a.clone(), b.clone(), c.clone()))
            .collect()
    }

    pub fn is_flex(&self, v: &Var) -> bool {
        self.flex_vars.contains(v)
    }

    pub fn domain(&self) -> impl Iterator<Item = i64> + Clone {
        self.lo..=self.hi
    }

    pub fn size(&self) -> u64 {
        (self.hi - self.lo + 1) as u64
    }

    /// The finite carrier used for the ordinal sort: `0..=size` and `omega`.
    pub fn ord_carrier(&self) -> Vec<OrdValue> {
        (0..=self.size()).map(OrdValue::Fin).chain(std::iter::once(OrdValue::Omega)).collect()
    }

    pub fn carrier(&self, sort: Sort) -> Result<Vec<Value>, EvalError> {
        match sort {
            Sort::Data => Ok(self.domain().map(Value::Int).collect()),
            Sort::Bool => Ok(vec![Value::Bool(false), Value::Bool(true)]),
            Sort::Ord => {
                if !self.ordinal {
                    return Err(EvalError::OrdinalDisabled);
                }
                Ok(self.ord_carrier().into_iter().map(Value::Ord).collect())
            }
            Sort::Proc | Sort::Cond => Err(EvalError::SortMismatch(format!("{sort:?}"))),
        }
    }

    /// Applies the overflow policy to a computed value.
    pub fn normalize(&self, n: i64) -> Result<i64, EvalError> {
        if (self.lo..=self.hi).contains(&n) {
            return Ok(n);
        }
        match self.overflow {
            Overflow::Saturate => Ok(n.clamp(self.lo, self.hi)),
            Overflow::Wrap => {
                let size = self.hi - self.lo + 1;
                Ok((n - self.lo).rem_euclid(size) + self.lo)
            }
            Overflow::Error => Err(EvalError::Overflow(n, self.lo, self.hi)),
        }
    }

    /// `ord(d)`: the rank of `d` in `[lo, hi]`.
    pub fn ord_of(&self, d: i64) -> Result<OrdValue, EvalError> {
        if !self.ordinal {
            return Err(EvalError::OrdinalDisabled);
        }
        let d = self.normalize(d)?;
        Ok(OrdValue::Fin((d - self.lo) as u64))
    }

    /// All valuations of the declared flexible variables.
    pub fn valuations(&self) -> Vec<Valuation> {
        self.valuations_over(&self.flex_vars)
    }

    pub fn valuations_over(&self, vars: &[Var]) -> Vec<Valuation> {
        let mut out = vec![Valuation::new()];
        for v in vars {
            let mut next = Vec::with_capacity(out.len() * self.size() as usize);
            for rho in &out {
                for d in self.domain() {
                    next.push(rho.updated(v, d));
                }
            }
            out = next;
        }
        out
    }

    /// The valuation mapping every flexible variable to `lo`.
    pub fn base_valuation(&self) -> Valuation {
        Valuation(self.flex_vars.iter().map(|v| (v.clone(), self.lo)).collect())
    }

    pub fn eval_data(&self, e: &DataTerm, env: Env2<'_>, binding: &[(Var, Value)]) -> Result<Value, EvalError> {
        match e {
            DataTerm::Bound(x, _) => binding
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| EvalError::Unbound(x.to_string())),
            DataTerm::Flex(v) => env.cur.get(v).map(Value::Int).ok_or_else(|| EvalError::NoValue(v.to_string())),
            DataTerm::Prev(v) => env
                .prev
                .get(v)
                .map(Value::Int)
                .ok_or_else(|| EvalError::NoValue(format!("{v}~"))),
            DataTerm::Num(n) => Ok(Value::Int(*n)),
            DataTerm::Bit(b) => Ok(Value::Bool(*b)),
            DataTerm::OrdLit(o) => {
                if !self.ordinal {
                    return Err(EvalError::OrdinalDisabled);
                }
                Ok(Value::Ord(*o))
            }
            DataTerm::App(op, args) => {
                let vals: Vec<Value> = args
                    .iter()
                    .map(|a| self.eval_data(a, env, binding))
                    .collect::<Result<_, _>>()?;
                match (op, vals.as_slice()) {
                    (Op::Add, [Value::Int(a), Value::Int(b)]) => {
                        Ok(Value::Int(self.normalize(a.checked_add(*b).ok_or(EvalError::Arithmetic)?)?))
                    }
                    (Op::Sub, [Value::Int(a), Value::Int(b)]) => {
                        Ok(Value::Int(self.normalize(a.checked_sub(*b).ok_or(EvalError::Arithmetic)?)?))
                    }
                    (Op::Mul, [Value::Int(a), Value::Int(b)]) => {
                        Ok(Value::Int(self.normalize(a.checked_mul(*b).ok_or(EvalError::Arithmetic)?)?))
                    }
                    (Op::Lt, [Value::Int(a), Value::Int(b)]) => Ok(Value::Bool(a < b)),
                    (Op::Lt, [Value::Ord(a), Value::Ord(b)]) => Ok(Value::Bool(a < b)),
                    (Op::Ord, [Value::Int(a)]) => Ok(Value::Ord(self.ord_of(*a)?)),
                    _ => Err(EvalError::SortMismatch(e.to_string())),
                }
            }
        }
    }

    /// Evaluates a closed data term of sort Data to an integer under `rho`.
    pub fn eval_int(&self, e: &DataTerm, rho: &Valuation) -> Result<i64, EvalError> {
        match self.eval_data(e, Env2::one(rho), &[])? {
            Value::Int(n) => Ok(n),
            _ => Err(EvalError::SortMismatch(e.to_string())),
        }
    }

    pub fn holds(&self, c: &Cond, env: Env2<'_>, binding: &mut Binding) -> Result<bool, EvalError> {
        match c {
            Cond::False => Ok(false),
            Cond::Eq(a, b) => {
                let (x, y) = (self.eval_data(a, env, binding)?, self.eval_data(b, env, binding)?);
                if std::mem::discriminant(&x) != std::mem::discriminant(&y) {
                    return Err(EvalError::SortMismatch(c.to_string()));
                }
                Ok(x == y)
            }
            Cond::Not(inner) => Ok(!self.holds(inner, env, binding)?),
            Cond::Or(a, b) => Ok(self.holds(a, env, binding)? || self.holds(b, env, binding)?),
            Cond::Exists(x, sort, body) => {
                for v in self.carrier(*sort)? {
                    binding.push((x.clone(), v));
                    let r = self.holds(body, env, binding);
                    binding.pop();
                    if r? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// Truth of a closed one-state condition under `rho`.
    pub fn holds1(&self, c: &Cond, rho: &Valuation) -> Result<bool, EvalError> {
        self.holds(c, Env2::one(rho), &mut Vec::new())
    }

    /// Truth of a closed two-state condition under `[cur, prev]`.
    pub fn holds2(&self, c: &Cond, cur: &Valuation, prev: &Valuation) -> Result<bool, EvalError> {
        self.holds(c, Env2 { cur, prev }, &mut Vec::new())
    }

    /// Validity over all current and previous valuations and all values of free bound variables.
    pub fn valid(&self, c: &Cond) -> Result<Validity, EvalError> {
        let (cur_vars, prev_vars) = c.split_vars();
        let cur_vars: Vec<Var> = cur_vars.into_iter().collect();
        let prev_vars: Vec<Var> = prev_vars.into_iter().collect();
        let free: Vec<(Var, Sort)> = c.free_bound_vars().into_iter().collect();
        let carriers: Vec<Vec<Value>> =
            free.iter().map(|(_, s)| self.carrier(*s)).collect::<Result<_, _>>()?;
        let base = self.base_valuation();
        let complete = |part: &Valuation| {
            let mut full = base.clone();
            for (k, v) in part.iter() {
                full.set(k.clone(), *v);
            }
            full
        };
        let curs: Vec<Valuation> = self.valuations_over(&cur_vars).iter().map(complete).collect();
        let prevs: Vec<Valuation> = self.valuations_over(&prev_vars).iter().map(complete).collect();
        let mut idx = vec![0usize; free.len()];
        loop {
            let mut binding: Binding = free
                .iter()
                .zip(&idx)
                .zip(&carriers)
                .map(|(((x, _), &k), c)| (x.clone(), c[k].clone()))
                .collect();
            for cur in &curs {
                for prev in &prevs {
                    if !self.holds(c, Env2 { cur, prev }, &mut binding)? {
                        return Ok(Validity::Invalid(Counterexample {
                            cur: cur.clone(),
                            prev: prev.clone(),
                            binding: binding.iter().map(|(x, v)| (x.clone(), v.to_string())).collect(),
                        }));
                    }
                }
            }
            if !advance(&mut idx, &carriers) {
                return Ok(Validity::Valid);
            }
        }
    }

    /// Whether some current and previous valuation and binding satisfy `c`.
    pub fn satisfiable(&self, c: &Cond) -> Result<bool, EvalError> {
        Ok(!self.valid(&Cond::not(c.clone()))?.is_valid())
    }

    /// Semantic equivalence of two conditions.
    pub fn equivalent(&self, a: &Cond, b: &Cond) -> Result<bool, EvalError> {
        if a == b {
            return Ok(true);
        }
        Ok(self.valid(&Cond::iff(a.clone(), b.clone()))?.is_valid())
    }

    /// All assignments of carrier values to the given bound variables.
    pub fn bindings(&self, vars: &[(Var, Sort)]) -> Result<Vec<Vec<(Var, Value)>>, EvalError> {
        let carriers: Vec<Vec<Value>> = vars.iter().map(|(_, s)| self.carrier(*s)).collect::<Result<_, _>>()?;
        let mut out = Vec::new();
        let mut idx = vec![0usize; vars.len()];
        loop {
            out.push(vars.iter().zip(&idx).zip(&carriers).map(|(((x, _), &k), c)| (x.clone(), c[k].clone())).collect());
            if !advance(&mut idx, &carriers) {
                return Ok(out);
            }
        }
    }

    /// A closed data term denoting `v`.
    pub fn literal(v: &Value) -> DataTerm {
        match v {
            Value::Int(n) => DataTerm::Num(*n),
            Value::Bool(b) => DataTerm::Bit(*b),
            Value::Ord(o) => DataTerm::OrdLit(*o),
        }
    }
}

fn advance(idx: &mut [usize], carriers: &[Vec<Value>]) -> bool {
    for (k, c) in idx.iter_mut().zip(carriers) {
        *k += 1;
        if *k < c.len() {
            return true;
        }
        *k = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::DataTerm as D;

    fn spec05() -> DataSpec {
        DataSpec::new(&["a"], &[], &["i", "j"], 0, 5).unwrap()
    }

    #[test]
    fn eval_uses_current_and_previous() {
        let s = DataSpec::default_spec();
        let cur = Valuation::from_pairs([("i", 5), ("j", 0)]);
        let prev = Valuation::from_pairs([("i", 1), ("j", 0)]);
        let s = s.with_domain(-1, 9).unwrap();
        let v = s.eval_data(&D::add(D::prev("i"), D::Num(1)), Env2 { cur: &cur, prev: &prev }, &[]);
        assert_eq!(v, Ok(Value::Int(2)));
    }

    #[test]
    fn exists_enumerates_domain() {
        let s = spec05();
        let c = Cond::exists(Var::new("X"), Sort::Data, Cond::lt(D::Num(3), D::bound("X")));
        let rho = s.base_valuation();
        assert!(s.holds1(&c, &rho).unwrap());
        let c = Cond::exists(Var::new("X"), Sort::Data, Cond::lt(D::Num(5), D::bound("X")));
        assert!(!s.holds1(&c, &rho).unwrap());
    }

    #[test]
    fn validity_and_counterexample() {
        let s = DataSpec::default_spec();
        let ok = Cond::implies(
            Cond::and(Cond::eq(D::prev("i"), D::Num(0)), Cond::eq(D::flex("i"), D::prev("i"))),
            Cond::eq(D::flex("i"), D::Num(0)),
        );
        assert!(s.valid(&ok).unwrap().is_valid());
        let bad = Cond::implies(Cond::eq(D::flex("i"), D::Num(0)), Cond::eq(D::flex("i"), D::Num(1)));
        match s.valid(&bad).unwrap() {
            Validity::Invalid(cx) => assert_eq!(cx.cur.get(&Var::new("i")), Some(0)),
            Validity::Valid => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn overflow_policies() {
        let s = spec05();
        assert_eq!(s.normalize(7), Ok(5));
        assert_eq!(s.with_overflow(Overflow::Wrap).normalize(7), Ok(1));
        assert_eq!(s.with_overflow(Overflow::Wrap).normalize(-1), Ok(5));
        assert!(s.with_overflow(Overflow::Error).normalize(7).is_err());
    }

    #[test]
    fn ord_is_rank_and_below_omega() {
        let s = spec05();
        assert_eq!(s.ord_of(0), Ok(OrdValue::Fin(0)));
        assert_eq!(s.ord_of(3), Ok(OrdValue::Fin(3)));
        for d in s.domain() {
            for e in s.domain() {
                assert_eq!(s.ord_of(d).unwrap() < s.ord_of(e).unwrap(), d < e);
            }
            assert!(s.ord_of(d).unwrap() < OrdValue::Omega);
        }
        assert_eq!(s.with_ordinal(false).ord_of(0), Err(EvalError::OrdinalDisabled));
    }

    #[test]
    fn gamma_checks() {
        assert!(DataSpec::new(&["a", "b", "c"], &[("a", "b", "c")], &["i"], 0, 1).is_ok());
        let bad = DataSpec::new(&["a", "b", "c"], &[("a", "b", "c"), ("c", "a", "b")], &["i"], 0, 1);
        assert!(matches!(bad, Err(SpecError::NotAssociative(..))));
        let conflict = DataSpec::new(&["a", "b", "c"], &[("a", "b", "c"), ("b", "a", "a")], &["i"], 0, 1);
        assert!(matches!(conflict, Err(SpecError::Conflict(..))));
    }

    #[test]
    fn toml_round() {
        let s = DataSpec::from_toml(
            "actions = [\"a\", \"b\", \"c\"]\nflex_vars = [\"i\"]\ndomain = [0, 2]\noverflow = \"wrap\"\nordinal = true\ncomm = [[\"a\", \"b\", \"c\"]]\n",
        )
        .unwrap();
        assert_eq!(s.overflow, Overflow::Wrap);
        assert_eq!(s.gamma(&ActName::new("b"), &ActName::new("a")), Some(ActName::new("c")));
        assert_eq!(s.valuations().len(), 3);
    }
}
