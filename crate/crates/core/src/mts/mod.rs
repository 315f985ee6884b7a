//! Mixed transition systems and synthesis of action-set parameters for
//! action-restricted CTL.

mod fixed;
mod formula;
mod model;
mod synth;
mod valuation;

pub use fixed::{enumerate_paths, eval_fixed, Path};
pub use formula::{Alpha, Formula};
pub use model::Mts;
pub use synth::{minimal_valuations, par_pre, par_pre_explicit, synthesize, StateValFun};
pub use valuation::{ParamValuation, Universe, ValuationSet};

/// Largest alphabet and variable count for explicit valuation sets.
pub const MAX_ACTIONS: usize = 8;
pub const MAX_VARS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MtsError {
    #[error("invalid model: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("{actions} actions and {vars} variables exceed the explicit limit of {MAX_ACTIONS} actions and {MAX_VARS} variables")]
    TooLarge { actions: usize, vars: usize },
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("empty action set")]
    EmptyActionSet,
    #[error("unknown state `{0}`")]
    UnknownState(String),
}
