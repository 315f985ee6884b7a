//! Markov chains, interval Markov chains and their parametric extension.

mod imc;
mod model;
mod synth;

pub use imc::{is_consistent, n_consistent, satisfies, CorrespondenceWitness};
pub use model::{Endpoint, Imc, Interval, Mc, ParamInterval, Pimc};
pub use synth::{lc_constraint, synthesize_consistency, synthesize_consistency_with, AvoidScope};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PimcError {
    #[error("invalid model: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("no value for parameter `{0}`")]
    MissingParameter(String),
    #[error("value {value} of parameter `{param}` is outside [0, 1]")]
    OutOfRange { param: String, value: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
}
