//! Parametric timed automata.

mod concrete;
mod dbm;
mod lu;
mod model;
mod symbolic;

pub use concrete::{replay, words_and_trace, ConcreteState, Run};
pub use dbm::{concrete_reach, ec_check, EcVerdict};
pub use lu::{classify_lu, lu_ef_emptiness, LuClass};
pub use model::{Edge, Pta, PtaBuilder};
pub use symbolic::{
    ef_synthesis, explore, initial_symbolic, ip_check, succ, IpVerdict, Limits, Pzg,
    SymbolicState,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PtaError {
    #[error("invalid automaton:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error("parameter `{0}` has no value")]
    MissingParameter(String),
    #[error("parameter `{0}` must be non-negative")]
    NegativeParameter(String),
    #[error("the initial symbolic state is empty")]
    EmptyInitialState,
    #[error("step {step} rejected: {reason}")]
    StepRejected { step: usize, reason: String },
    #[error("the automaton still has parameters")]
    NotParameterFree,
    #[error("the automaton is not an L/U automaton")]
    NotLu,
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
}
