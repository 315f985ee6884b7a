//! Text formats for models and queries, and JSON result emission.

pub mod json;
pub mod lexer;
pub mod parser;
pub mod mts;
pub mod pimc;
pub mod ppn;
pub mod pta;
pub mod query;

pub use lexer::{ParseError, SourceSpan};
pub use parser::parse_constraint;
pub use mts::{parse_formula, parse_mts, print_mts};
pub use pimc::{parse_imc, parse_mc, parse_pimc, print_imc, print_mc, print_pimc};
pub use ppn::{parse_ppn, print_ppn};
pub use pta::{parse_pta, print_pta};
pub use query::{
    parse_mts_query, parse_pimc_query, parse_ppn_query, parse_pta_query, PimcQuery, PpnMode,
    PpnProperty, PpnQuery, PtaQuery,
};

use crate::mts::MtsError;
use crate::pimc::PimcError;
use crate::ppn::PpnError;
use crate::pta::PtaError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid model:\n  {}", .0.join("\n  "))]
    Semantic(Vec<String>),
}

impl From<PtaError> for ModelError {
    fn from(e: PtaError) -> Self {
        match e {
            PtaError::Invalid(problems) => ModelError::Semantic(problems),
            other => ModelError::Semantic(vec![other.to_string()]),
        }
    }
}

impl From<PimcError> for ModelError {
    fn from(e: PimcError) -> Self {
        match e {
            PimcError::Invalid(problems) => ModelError::Semantic(problems),
            other => ModelError::Semantic(vec![other.to_string()]),
        }
    }
}

impl From<MtsError> for ModelError {
    fn from(e: MtsError) -> Self {
        match e {
            MtsError::Invalid(problems) => ModelError::Semantic(problems),
            other => ModelError::Semantic(vec![other.to_string()]),
        }
    }
}

impl From<PpnError> for ModelError {
    fn from(e: PpnError) -> Self {
        match e {
            PpnError::Invalid(problems) => ModelError::Semantic(problems),
            other => ModelError::Semantic(vec![other.to_string()]),
        }
    }
}
