//! Explicit-state exploration and bisimulation checking over the transition
//! rules, matching actions up to data equivalence.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::data::{DataSpec, EvalError};
use crate::semantics::{canonical, terminates, transitions, ActionEquiv};
use crate::terms::*;

pub const DEFAULT_MAX_STATES: usize = 10_000;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum BisimError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("witness relation is not a bisimulation: {0}")]
    InvalidWitness(String),
}

/// Reachable states of one or more terms, indexed by canonical form.
#[derive(Clone, Debug)]
pub struct StateSpace {
    pub states: Vec<Proc>,
    index: HashMap<Proc, usize>,
    pub valuations: Vec<Valuation>,
    /// Per state: `(valuation index, action, target state)`.
    pub edges: Vec<Vec<(usize, AtomicAction, usize)>>,
    /// Per state and valuation: successful termination.
    pub term: Vec<Vec<bool>>,
    pub frontier: Vec<usize>,
    pub complete: bool,
}

impl StateSpace {
    pub fn state_of(&self, t: &Proc) -> Option<usize> {
        self.index.get(&canonical(t)).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }
}

pub fn explore(spec: &DataSpec, t: &Proc, max_states: usize) -> Result<StateSpace, EvalError> {
    explore_many(spec, std::slice::from_ref(t), max_states)
}

pub fn explore_many(spec: &DataSpec, roots: &[Proc], max_states: usize) -> Result<StateSpace, EvalError> {
    let valuations = spec.valuations();
    let mut sp = StateSpace {
        states: Vec::new(),
        index: HashMap::new(),
        valuations,
        edges: Vec::new(),
        term: Vec::new(),
        frontier: Vec::new(),
        complete: true,
    };
    let mut queue = VecDeque::new();
    for r in roots {
        let c = canonical(r);
        if !sp.index.contains_key(&c) {
            sp.index.insert(c.clone(), sp.states.len());
            queue.push_back(sp.states.len());
            sp.states.push(c);
            sp.edges.push(Vec::new());
            sp.term.push(Vec::new());
        }
    }
    while let Some(s) = queue.pop_front() {
        let t = sp.states[s].clone();
        let mut edges = Vec::new();
        let mut flags = Vec::with_capacity(sp.valuations.len());
        for (k, rho) in sp.valuations.iter().enumerate() {
            flags.push(terminates(spec, &t, rho)?);
            for (a, t2) in transitions(spec, &t, rho)? {
                let c = canonical(&t2);
                let target = match sp.index.get(&c) {
                    Some(&i) => i,
                    None => {
                        if sp.states.len() >= max_states {
                            sp.complete = false;
                            sp.frontier.push(s);
                            sp.frontier.extend(queue.iter().copied());
                            sp.frontier.sort_unstable();
                            sp.frontier.dedup();
                            return Ok(sp);
                        }
                        let i = sp.states.len();
                        sp.index.insert(c.clone(), i);
                        sp.states.push(c);
                        sp.edges.push(Vec::new());
                        sp.term.push(Vec::new());
                        queue.push_back(i);
                        i
                    }
                };
                edges.push((k, a, target));
            }
        }
        sp.edges[s] = edges;
        sp.term[s] = flags;
    }
    Ok(sp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub rho: Valuation,
    pub side: Side,
    pub action: AtomicAction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ending {
    /// Termination under `rho` differs.
    Termination { rho: Valuation, left: bool },
    /// The last move has no counterpart on the other side.
    Unmatched,
}

/// A distinguishing experiment: a sequence of moves and an observation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Experiment {
    pub moves: Vec<Move>,
    pub ending: Ending,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.moves.iter().enumerate() {
            if k > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{} {} @{}", m.side, m.action, m.rho)?;
        }
        if !self.moves.is_empty() {
            f.write_str(" ; ")?;
        }
        match &self.ending {
            Ending::Termination { rho, left } => {
                let (yes, no) = if *left { ("left", "right") } else { ("right", "left") };
                write!(f, "{yes} terminates @{rho}, {no} does not")
            }
            Ending::Unmatched => f.write_str("unmatched"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Yes(Vec<(Proc, Proc)>),
    No(Experiment),
    Unknown { states: usize },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes(_) => f.write_str("YES"),
            Verdict::No(e) => write!(f, "NO {e}"),
            Verdict::Unknown { states } => write!(f, "UNKNOWN(states={states})"),
        }
    }
}

struct PairMove {
    side: Side,
    rho: usize,
    action: AtomicAction,
    matches: Vec<usize>,
}

pub struct Bisim<'a> {
    spec: &'a DataSpec,
    eq: ActionEquiv,
    pub max_states: usize,
}

impl<'a> Bisim<'a> {
    pub fn new(spec: &'a DataSpec) -> Self {
        Bisim { spec, eq: ActionEquiv::new(), max_states: DEFAULT_MAX_STATES }
    }

    pub fn with_max_states(mut self, n: usize) -> Self {
        self.max_states = n;
        self
    }

    pub fn check(&self, t1: &Proc, t2: &Proc) -> Result<Verdict, BisimError> {
        let sp = explore_many(self.spec, &[t1.clone(), t2.clone()], self.max_states)?;
        if !sp.complete {
            return Ok(Verdict::Unknown { states: sp.states.len() });
        }
        let (Some(s1), Some(s2)) = (sp.state_of(t1), sp.state_of(t2)) else {
            return Ok(Verdict::Unknown { states: sp.states.len() });
        };

        let mut pairs: Vec<(usize, usize)> = vec![(s1, s2)];
        let mut pair_index: HashMap<(usize, usize), usize> = HashMap::from([((s1, s2), 0)]);
        let mut moves: Vec<Vec<PairMove>> = Vec::new();
        let mut k = 0;
        while k < pairs.len() {
            let (p, q) = pairs[k];
            let mut here = Vec::new();
            for (side, from, other) in [(Side::Left, p, q), (Side::Right, q, p)] {
                for (rho, a, t) in &sp.edges[from] {
                    let mut matches = Vec::new();
                    for (rho2, b, u) in &sp.edges[other] {
                        if rho2 != rho || !self.eq.equiv(self.spec, a, b) {
                            continue;
                        }
                        let key = if side == Side::Left { (*t, *u) } else { (*u, *t) };
                        let idx = *pair_index.entry(key).or_insert_with(|| {
                            pairs.push(key);
                            pairs.len() - 1
                        });
                        matches.push(idx);
                    }
                    here.push(PairMove { side, rho: *rho, action: a.clone(), matches });
                }
            }
            moves.push(here);
            k += 1;
        }

        let mut round: Vec<Option<usize>> = pairs
            .iter()
            .map(|&(p, q)| if sp.term[p] != sp.term[q] { Some(0) } else { None })
            .collect();
        let mut r = 0;
        loop {
            r += 1;
            let snapshot = round.clone();
            let mut changed = false;
            for (i, mv) in moves.iter().enumerate() {
                if snapshot[i].is_some() {
                    continue;
                }
                if mv.iter().any(|m| m.matches.iter().all(|&j| snapshot[j].is_some())) {
                    round[i] = Some(r);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        if round[0].is_some() {
            return Ok(Verdict::No(self.experiment(&sp, &pairs, &moves, &round)));
        }
        let relation: Vec<(Proc, Proc)> = pairs
            .iter()
            .zip(&round)
            .filter(|(_, r)| r.is_none())
            .map(|(&(p, q), _)| (sp.states[p].clone(), sp.states[q].clone()))
            .collect();
        self.validate(&relation)?;
        Ok(Verdict::Yes(relation))
    }

    fn experiment(
        &self,
        sp: &StateSpace,
        pairs: &[(usize, usize)],
        moves: &[Vec<PairMove>],
        round: &[Option<usize>],
    ) -> Experiment {
        let mut cur = 0;
        let mut out = Vec::new();
        loop {
            let r = round[cur].unwrap_or(0);
            if r == 0 {
                let (p, q) = pairs[cur];
                let k = (0..sp.valuations.len()).find(|&k| sp.term[p][k] != sp.term[q][k]).unwrap_or(0);
                return Experiment {
                    moves: out,
                    ending: Ending::Termination { rho: sp.valuations[k].clone(), left: sp.term[p][k] },
                };
            }
            let Some(m) = moves[cur]
                .iter()
                .find(|m| m.matches.iter().all(|&j| round[j].is_some_and(|x| x < r)))
            else {
                return Experiment { moves: out, ending: Ending::Unmatched };
            };
            out.push(Move { rho: sp.valuations[m.rho].clone(), side: m.side, action: m.action.clone() });
            match m.matches.iter().max_by_key(|&&j| round[j]) {
                None => return Experiment { moves: out, ending: Ending::Unmatched },
                Some(&j) => cur = j,
            }
        }
    }

    /// Re-checks the transfer conditions of a candidate relation from the transition rules.
    pub fn validate(&self, relation: &[(Proc, Proc)]) -> Result<(), BisimError> {
        let set: std::collections::HashSet<(Proc, Proc)> =
            relation.iter().map(|(a, b)| (canonical(a), canonical(b))).collect();
        for (p, q) in &set {
            for rho in self.spec.valuations() {
                if terminates(self.spec, p, &rho)? != terminates(self.spec, q, &rho)? {
                    return Err(BisimError::InvalidWitness(format!("termination at {p} / {q}")));
                }
                let tp = transitions(self.spec, p, &rho)?;
                let tq = transitions(self.spec, q, &rho)?;
                for (from, to, flip) in [(&tp, &tq, false), (&tq, &tp, true)] {
                    for (a, x) in from {
                        let ok = to.iter().any(|(b, y)| {
                            let key = if flip { (canonical(y), canonical(x)) } else { (canonical(x), canonical(y)) };
                            self.eq.equiv(self.spec, a, b) && set.contains(&key)
                        });
                        if !ok {
                            return Err(BisimError::InvalidWitness(format!("transfer of {a} at {p} / {q}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn bisimilar(spec: &DataSpec, t1: &Proc, t2: &Proc, max_states: usize) -> Result<Verdict, BisimError> {
    Bisim::new(spec).with_max_states(max_states).check(t1, t2)
}
