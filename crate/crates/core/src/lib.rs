//! Imperative process algebra with data, its operational semantics, and a
//! rely/guarantee proof checker backed by an explicit-state truth oracle.

pub mod axioms;
pub mod bisim;
pub mod data;
pub mod gen;
pub mod oracle;
pub mod parse;
pub mod rg;
pub mod semantics;
pub mod terms;

pub use data::{DataSpec, Env2, EvalError, Overflow, SpecError, Validity, Value};
pub use parse::{parse_cond, parse_data, parse_proc, parse_valuation, ParseCtx, ParseError};
pub use terms::*;
