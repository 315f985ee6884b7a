//! Parametric Petri nets: firing, Karp–Miller analysis and parametric
//! coverability under the monotone subclasses.

mod km;
mod model;
mod param;

pub use km::{bounded_reach, coverable, find_cover, km_analyze, KmAnalysis, KmNode, ReachVerdict};
pub use model::{fire, Count, Marking, Net, OmegaMarking, Ppn, Subclass, Weight};
pub use param::{
    decide, existential_coverable, universal_coverable, Answer, Mode, PpnLimits, Property, Witness,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PpnError {
    #[error("invalid net: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("no value for parameter `{0}`")]
    MissingParameter(String),
    #[error("parameter `{param}` must be a natural number, got {value}")]
    NotNatural { param: String, value: String },
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("net has ω weights")]
    OmegaWeights,
}
