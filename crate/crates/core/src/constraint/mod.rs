//! Exact linear constraints over clocks and parameters.

mod atom;
mod convex;
mod fm;
mod rational;
mod set;
mod term;
mod valuation;
mod var;

pub use atom::{AtomicConstraint, Rel};
pub use convex::{Bound, ConvexConstraint, IntegerPoint, DELAY_VAR};
pub use rational::{int, parse_rational, ratio, render, Rational};
pub use set::ConstraintSet;
pub use term::LinearTerm;
pub use valuation::Valuation;
pub use var::{Var, VarKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstraintError {
    #[error("variable `{0}` is not assigned")]
    MissingVariable(String),
    #[error("variable `{0}` is not in the constraint context")]
    UnknownVariable(String),
    #[error("constraint contexts differ")]
    ContextMismatch,
}
