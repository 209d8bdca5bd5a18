//! Seeded random generation of closed terms.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::DataSpec;
use crate::terms::*;

pub struct Gen {
    rng: ChaCha8Rng,
    pub actions: Vec<ActName>,
    pub vars: Vec<Var>,
    pub lo: i64,
    pub hi: i64,
    comm: Vec<(ActName, ActName, ActName)>,
    /// Include parameterised actions `a(e)`.
    pub params: bool,
}

impl Gen {
    pub fn new(spec: &DataSpec, seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            actions: spec.actions.iter().cloned().collect(),
            vars: spec.flex_vars.clone(),
            lo: spec.lo,
            hi: spec.hi,
            comm: spec.comm_triples(),
            params: true,
        }
    }

    pub fn without_params(mut self) -> Self {
        self.params = false;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items.choose(&mut self.rng).expect("non-empty").clone()
    }

    pub fn value(&mut self) -> i64 {
        self.rng.random_range(self.lo..=self.hi)
    }

    pub fn var(&mut self) -> Var {
        let vars = self.vars.clone();
        self.pick(&vars)
    }

    pub fn act_name(&mut self) -> ActName {
        let acts = self.actions.clone();
        self.pick(&acts)
    }

    /// Some `(a, b, c)` with `a | b = c`, if the communication function is not empty.
    pub fn comm_triple(&mut self) -> Option<(ActName, ActName, ActName)> {
        if self.comm.is_empty() {
            return None;
        }
        let comm = self.comm.clone();
        Some(self.pick(&comm))
    }

    pub fn data(&mut self, depth: usize) -> DataTerm {
        if depth <= 1 || self.chance(0.5) {
            return if self.chance(0.5) { DataTerm::Num(self.value()) } else { DataTerm::Flex(self.var()) };
        }
        let a = self.data(depth - 1);
        let b = self.data(depth - 1);
        if self.chance(0.5) {
            DataTerm::add(a, b)
        } else {
            DataTerm::sub(a, b)
        }
    }

    pub fn cond(&mut self, depth: usize) -> Cond {
        if depth <= 1 {
            return match self.below(4) {
                0 => Cond::tt(),
                1 => Cond::False,
                2 => Cond::Eq(self.data(2), self.data(1)),
                _ => Cond::lt(self.data(1), self.data(2)),
            };
        }
        match self.below(5) {
            0 => Cond::not(self.cond(depth - 1)),
            1 => Cond::or(self.cond(depth - 1), self.cond(depth - 1)),
            2 => Cond::and(self.cond(depth - 1), self.cond(depth - 1)),
            _ => self.cond(1),
        }
    }

    pub fn plain(&mut self) -> AtomicAction {
        AtomicAction::Plain(self.act_name())
    }

    pub fn param(&mut self, name: ActName, arity: usize) -> AtomicAction {
        AtomicAction::Param(name, (0..arity).map(|_| self.data(2)).collect())
    }

    pub fn assignment(&mut self) -> AtomicAction {
        AtomicAction::Assign(self.var(), self.data(2))
    }

    pub fn atomic(&mut self) -> AtomicAction {
        match self.below(if self.params { 4 } else { 3 }) {
            0 | 1 => self.plain(),
            2 => self.assignment(),
            _ => {
                let a = self.act_name();
                self.param(a, 1)
            }
        }
    }

    /// A member of the atomic terms or `delta`.
    pub fn alpha(&mut self) -> Proc {
        if self.chance(0.15) {
            dead()
        } else {
            atom(self.atomic())
        }
    }

    pub fn action_set(&mut self) -> BTreeSet<ActName> {
        let acts = self.actions.clone();
        acts.into_iter().filter(|_| self.chance(0.5)).collect()
    }

    pub fn valuation(&mut self) -> Valuation {
        let vars = self.vars.clone();
        let mut rho = Valuation::new();
        for v in vars {
            let n = self.value();
            rho.set(v, n);
        }
        rho
    }

    fn leaf(&mut self) -> Proc {
        match self.below(8) {
            0 => dead(),
            1 => empty(),
            _ => atom(self.atomic()),
        }
    }

    /// A closed RG process term of depth at most `depth`.
    pub fn rg_proc(&mut self, depth: usize) -> Proc {
        if depth <= 1 || self.chance(0.25) {
            return self.leaf();
        }
        let d = depth - 1;
        match self.below(7) {
            0 | 1 => alt(self.rg_proc(d), self.rg_proc(d)),
            2 | 3 => seq(self.rg_proc(d), self.rg_proc(d)),
            4 => iter(self.rg_proc(d), self.rg_proc(d)),
            5 => par(self.rg_proc(d), self.rg_proc(d)),
            _ => {
                if self.chance(0.5) {
                    guard(self.cond(2), self.rg_proc(d))
                } else {
                    encap(self.action_set(), self.rg_proc(d))
                }
            }
        }
    }

    /// A closed process term of depth at most `depth`, over the whole signature.
    pub fn proc(&mut self, depth: usize) -> Proc {
        if depth <= 1 || self.chance(0.25) {
            return self.leaf();
        }
        let d = depth - 1;
        match self.below(11) {
            0 | 1 => alt(self.proc(d), self.proc(d)),
            2 | 3 => seq(self.proc(d), self.proc(d)),
            4 => iter(self.proc(d), self.proc(d)),
            5 => par(self.proc(d), self.proc(d)),
            6 => left_merge(self.proc(d), self.proc(d)),
            7 => comm_merge(self.proc(d), self.proc(d)),
            8 => encap(self.action_set(), self.proc(d)),
            9 => guard(self.cond(2), self.proc(d)),
            _ => eval(self.valuation(), self.proc(d)),
        }
    }

    /// A term with at most one parallel composition, to keep state spaces small.
    pub fn small_rg_proc(&mut self, depth: usize) -> Proc {
        loop {
            let p = self.rg_proc(depth);
            let mut pars = 0;
            p.visit(&mut |t| {
                if matches!(t, ProcTerm::Par(..) | ProcTerm::Iter(..)) {
                    pars += 1;
                }
            });
            if pars <= 1 {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_deterministic() {
        let spec = DataSpec::default_spec();
        let a: Vec<Proc> = {
            let mut g = Gen::new(&spec, 7);
            (0..20).map(|_| g.proc(4)).collect()
        };
        let mut g = Gen::new(&spec, 7);
        let b: Vec<Proc> = (0..20).map(|_| g.proc(4)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn rg_terms_are_rg_and_bounded() {
        let spec = DataSpec::default_spec();
        let mut g = Gen::new(&spec, 1);
        for _ in 0..200 {
            let p = g.rg_proc(4);
            assert!(p.is_rg());
            assert!(p.depth() <= 4);
        }
    }
}
