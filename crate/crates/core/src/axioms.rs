//! The equational axioms of deACPei and the derivable iteration equations,
//! with random closed instantiation.

use std::fmt;
use std::str::FromStr;

use crate::data::{DataSpec, EvalError};
use crate::gen::Gen;
use crate::terms::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    CM1E,
    CM2E,
    CM3,
    CM4,
    CM5E,
    CM6E,
    CM7,
    CM8,
    CM9,
    D0,
    D1,
    D2,
    D3,
    D4,
    BKS1,
    BKS5,
    BKS2,
    BKS3,
    BKS4,
    IMP1,
    IMP2,
    GC1,
    GC2,
    GC3,
    GC4,
    GC5,
    GC6,
    GC7,
    GC8,
    GC9,
    GC10,
    GC11,
    V0,
    V1,
    V2,
    V3,
    V4,
    V5,
    CM7Da,
    CM7Db,
    CM7Dc,
    CM7Dd,
    CM7De,
    CM7Df,
    D1Da,
    D2D,
    D1Db,
}

/// Which table an equation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Table {
    Acpei,
    Derivable,
    Deacpei,
}

impl Axiom {
    pub const ALL: [Axiom; 56] = {
        use Axiom::*;
        [
            A1, A2, A3, A4, A5, A6, A7, A8, A9, CM1E, CM2E, CM3, CM4, CM5E, CM6E, CM7, CM8, CM9, D0, D1, D2, D3, D4,
            BKS1, BKS5, BKS2, BKS3, BKS4, IMP1, IMP2, GC1, GC2, GC3, GC4, GC5, GC6, GC7, GC8, GC9, GC10, GC11, V0,
            V1, V2, V3, V4, V5, CM7Da, CM7Db, CM7Dc, CM7Dd, CM7De, CM7Df, D1Da, D2D, D1Db,
        ]
    };

    pub fn name(self) -> String {
        format!("{self:?}")
    }

    pub fn table(self) -> Table {
        use Axiom::*;
        match self {
            BKS2 | BKS3 | BKS4 => Table::Derivable,
            IMP1 | IMP2 | GC1 | GC2 | GC3 | GC4 | GC5 | GC6 | GC7 | GC8 | GC9 | GC10 | GC11 | V0 | V1 | V2 | V3
            | V4 | V5 | CM7Da | CM7Db | CM7Dc | CM7Dd | CM7De | CM7Df | D1Da | D2D | D1Db => Table::Deacpei,
            _ => Table::Acpei,
        }
    }

    /// The axioms proper, without the derivable equations.
    pub fn axioms() -> impl Iterator<Item = Axiom> {
        Self::ALL.into_iter().filter(|a| a.table() != Table::Derivable)
    }

    pub fn derivable() -> impl Iterator<Item = Axiom> {
        Self::ALL.into_iter().filter(|a| a.table() == Table::Derivable)
    }

    /// A random closed instance `(lhs, rhs)`; metavariables of sort process get terms of depth at most `depth`.
    pub fn instance(self, spec: &DataSpec, g: &mut Gen, depth: usize) -> Result<(Proc, Proc), EvalError> {
        use Axiom::*;
        let d = depth;
        let (x, y, z) = (g.proc(d), g.proc(d), g.proc(d));
        let inst = match self {
            A1 => (alt(x.clone(), y.clone()), alt(y, x)),
            A2 => (alt(alt(x.clone(), y.clone()), z.clone()), alt(x, alt(y, z))),
            A3 => (alt(x.clone(), x.clone()), x),
            A4 => (seq(alt(x.clone(), y.clone()), z.clone()), alt(seq(x, z.clone()), seq(y, z))),
            A5 => (seq(seq(x.clone(), y.clone()), z.clone()), seq(x, seq(y, z))),
            A6 => (alt(x.clone(), dead()), x),
            A7 => (seq(dead(), x), dead()),
            A8 => (seq(x.clone(), empty()), x),
            A9 => (seq(empty(), x.clone()), x),
            CM1E => {
                let all: std::collections::BTreeSet<ActName> = spec.actions.clone();
                (
                    par(x.clone(), y.clone()),
                    alt(
                        alt(alt(left_merge(x.clone(), y.clone()), left_merge(y.clone(), x.clone())), comm_merge(x.clone(), y.clone())),
                        seq(encap(all.clone(), x), encap(all, y)),
                    ),
                )
            }
            CM2E => (left_merge(empty(), x), dead()),
            CM3 => {
                let a = g.alpha();
                (left_merge(seq(a.clone(), x.clone()), y.clone()), seq(a, par(x, y)))
            }
            CM4 => (left_merge(alt(x.clone(), y.clone()), z.clone()), alt(left_merge(x, z.clone()), left_merge(y, z))),
            CM5E => (comm_merge(empty(), x), dead()),
            CM6E => (comm_merge(x, empty()), dead()),
            CM7 => {
                let (a, b) = (g.act_name(), g.act_name());
                let c = match spec.gamma(&a, &b) {
                    Some(c) => act(c.as_str()),
                    None => dead(),
                };
                (
                    comm_merge(seq(act(a.as_str()), x.clone()), seq(act(b.as_str()), y.clone())),
                    seq(c, par(x, y)),
                )
            }
            CM8 => (comm_merge(alt(x.clone(), y.clone()), z.clone()), alt(comm_merge(x, z.clone()), comm_merge(y, z))),
            CM9 => (comm_merge(x.clone(), alt(y.clone(), z.clone())), alt(comm_merge(x.clone(), y), comm_merge(x, z))),
            D0 => (encap(g.action_set(), empty()), empty()),
            D1 | D2 => {
                let a = g.act_name();
                let mut h = g.action_set();
                if self == D1 {
                    h.remove(&a);
                    (encap(h, act(a.as_str())), act(a.as_str()))
                } else {
                    h.insert(a.clone());
                    (encap(h, act(a.as_str())), dead())
                }
            }
            D3 => {
                let h = g.action_set();
                (encap(h.clone(), alt(x.clone(), y.clone())), alt(encap(h.clone(), x), encap(h, y)))
            }
            D4 => {
                let h = g.action_set();
                (encap(h.clone(), seq(x.clone(), y.clone())), seq(encap(h.clone(), x), encap(h, y)))
            }
            BKS1 => (iter(x.clone(), y.clone()), alt(seq(x.clone(), iter(x, y.clone())), y)),
            BKS5 => (iter(alt(x.clone(), empty()), y.clone()), iter(x, y)),
            BKS2 => (iter(x.clone(), seq(y.clone(), z.clone())), seq(iter(x, y), z)),
            BKS3 => {
                let xy = alt(x.clone(), y.clone());
                (iter(x, alt(seq(y, iter(xy.clone(), z.clone())), z.clone())), iter(xy, z))
            }
            BKS4 => {
                let h = g.action_set();
                (encap(h.clone(), iter(x.clone(), y.clone())), iter(encap(h.clone(), x), encap(h, y)))
            }
            IMP1 => {
                let e = g.data(2);
                let e2 = equal_data(g, &e);
                let v = g.var();
                let a = g.act_name();
                (
                    alt(seq(atom(AtomicAction::Assign(v.clone(), e.clone())), x.clone()), atom(AtomicAction::Param(a.clone(), vec![e]))),
                    alt(seq(atom(AtomicAction::Assign(v, e2.clone())), x), atom(AtomicAction::Param(a, vec![e2]))),
                )
            }
            IMP2 => {
                let phi = g.cond(2);
                let psi = equivalent_cond(g, &phi);
                (guard(phi, x.clone()), guard(psi, x))
            }
            GC1 => (guard(Cond::tt(), x.clone()), x),
            GC2 => (guard(Cond::False, x), dead()),
            GC3 => (guard(g.cond(2), dead()), dead()),
            GC4 => {
                let phi = g.cond(2);
                (guard(phi.clone(), alt(x.clone(), y.clone())), alt(guard(phi.clone(), x), guard(phi, y)))
            }
            GC5 => {
                let phi = g.cond(2);
                (guard(phi.clone(), seq(x.clone(), y.clone())), seq(guard(phi, x), y))
            }
            GC6 => {
                let (phi, psi) = (g.cond(2), g.cond(2));
                (guard(phi.clone(), guard(psi.clone(), x.clone())), guard(Cond::and(phi, psi), x))
            }
            GC7 => {
                let (phi, psi) = (g.cond(2), g.cond(2));
                (guard(Cond::or(phi.clone(), psi.clone()), x.clone()), alt(guard(phi, x.clone()), guard(psi, x)))
            }
            GC8 => {
                let phi = g.cond(2);
                (left_merge(guard(phi.clone(), x.clone()), y.clone()), guard(phi, left_merge(x, y)))
            }
            GC9 => {
                let phi = g.cond(2);
                (comm_merge(guard(phi.clone(), x.clone()), y.clone()), guard(phi, comm_merge(x, y)))
            }
            GC10 => {
                let phi = g.cond(2);
                (comm_merge(x.clone(), guard(phi.clone(), y.clone())), guard(phi, comm_merge(x, y)))
            }
            GC11 => {
                let (phi, h) = (g.cond(2), g.action_set());
                (encap(h.clone(), guard(phi.clone(), x.clone())), guard(phi, encap(h, x)))
            }
            V0 => (eval(g.valuation(), empty()), empty()),
            V1 => {
                let rho = g.valuation();
                let a = if g.chance(0.2) { dead() } else { atom(g.plain()) };
                (eval(rho.clone(), seq(a.clone(), x.clone())), seq(a, eval(rho, x)))
            }
            V2 => {
                let rho = g.valuation();
                let a = g.act_name();
                let arity = 1 + g.below(2);
                let AtomicAction::Param(_, es) = g.param(a.clone(), arity) else { unreachable!() };
                let vs = es.iter().map(|e| e.apply_valuation(&rho)).collect();
                (
                    eval(rho.clone(), seq(atom(AtomicAction::Param(a.clone(), es)), x.clone())),
                    seq(atom(AtomicAction::Param(a, vs)), eval(rho, x)),
                )
            }
            V3 => {
                let rho = g.valuation();
                let (v, e) = (g.var(), g.data(2));
                let n = spec.eval_int(&e, &rho)?;
                (
                    eval(rho.clone(), seq(atom(AtomicAction::Assign(v.clone(), e.clone())), x.clone())),
                    seq(atom(AtomicAction::Assign(v.clone(), e.apply_valuation(&rho))), eval(rho.updated(&v, n), x)),
                )
            }
            V4 => {
                let rho = g.valuation();
                (eval(rho.clone(), alt(x.clone(), y.clone())), alt(eval(rho.clone(), x), eval(rho, y)))
            }
            V5 => {
                let (rho, phi) = (g.valuation(), g.cond(2));
                (eval(rho.clone(), guard(phi.clone(), x.clone())), guard(phi.apply_valuation(&rho), eval(rho, x)))
            }
            CM7Da => {
                let Some((a, b, c)) = g.comm_triple() else { return Ok((dead(), dead())) };
                let arity = 1 + g.below(2);
                let AtomicAction::Param(_, es) = g.param(a.clone(), arity) else { unreachable!() };
                let AtomicAction::Param(_, fs) = g.param(b.clone(), arity) else { unreachable!() };
                let eqs = Cond::and_all(es.iter().zip(&fs).map(|(e, f)| Cond::Eq(e.clone(), f.clone())));
                (
                    comm_merge(
                        seq(atom(AtomicAction::Param(a, es.clone())), x.clone()),
                        seq(atom(AtomicAction::Param(b, fs)), y.clone()),
                    ),
                    guard(eqs, seq(atom(AtomicAction::Param(c, es)), par(x, y))),
                )
            }
            CM7Db => {
                let (a, b) = (g.act_name(), g.act_name());
                let n = 1 + g.below(2);
                let m = if spec.gamma(&a, &b).is_some() { n % 2 + 1 } else { 1 + g.below(2) };
                let pa = g.param(a, n);
                let pb = g.param(b, m);
                (comm_merge(seq(atom(pa), x), seq(atom(pb), y)), dead())
            }
            CM7Dc | CM7Dd => {
                let a = g.act_name();
                let pa = atom(g.param(a, 1));
                let alpha = non_param_alpha(g);
                if self == CM7Dc {
                    (comm_merge(seq(pa, x), seq(alpha, y)), dead())
                } else {
                    (comm_merge(seq(alpha, x), seq(pa, y)), dead())
                }
            }
            CM7De | CM7Df => {
                let asg = atom(g.assignment());
                let alpha = g.alpha();
                if self == CM7De {
                    (comm_merge(seq(asg, x), seq(alpha, y)), dead())
                } else {
                    (comm_merge(seq(alpha, x), seq(asg, y)), dead())
                }
            }
            D1Da | D2D => {
                let a = g.act_name();
                let n = 1 + g.below(2);
                let pa = g.param(a.clone(), n);
                let mut h = g.action_set();
                if self == D1Da {
                    h.remove(&a);
                    (encap(h, atom(pa.clone())), atom(pa))
                } else {
                    h.insert(a);
                    (encap(h, atom(pa)), dead())
                }
            }
            D1Db => {
                let asg = atom(g.assignment());
                (encap(g.action_set(), asg.clone()), asg)
            }
        };
        Ok(inst)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown axiom `{0}`")]
pub struct UnknownAxiom(String);

impl FromStr for Axiom {
    type Err = UnknownAxiom;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownAxiom(s.to_string()))
    }
}

fn non_param_alpha(g: &mut Gen) -> Proc {
    match g.below(3) {
        0 => dead(),
        1 => atom(g.assignment()),
        _ => atom(g.plain()),
    }
}

/// A syntactically different data term denoting the same value in every valuation.
fn equal_data(g: &mut Gen, e: &DataTerm) -> DataTerm {
    match g.below(3) {
        0 => DataTerm::add(e.clone(), DataTerm::Num(0)),
        1 => DataTerm::sub(e.clone(), DataTerm::Num(0)),
        _ => DataTerm::add(DataTerm::Num(0), e.clone()),
    }
}

/// A syntactically different condition equivalent to `phi` in every valuation.
fn equivalent_cond(g: &mut Gen, phi: &Cond) -> Cond {
    match g.below(3) {
        0 => Cond::not(Cond::not(phi.clone())),
        1 => Cond::or(phi.clone(), phi.clone()),
        _ => Cond::or(Cond::False, phi.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
        }
        assert_eq!(Axiom::axioms().count(), 53);
        assert_eq!(Axiom::derivable().count(), 3);
    }

    #[test]
    fn every_axiom_instantiates() {
        let spec = DataSpec::new(&["a", "b", "c"], &[("a", "b", "c")], &["i", "j"], 0, 2).unwrap();
        let mut g = Gen::new(&spec, 3);
        for a in Axiom::ALL {
            let (l, r) = a.instance(&spec, &mut g, 2).unwrap();
            assert_ne!(l, r, "{a}");
        }
    }
}
