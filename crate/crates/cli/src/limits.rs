use paraverse_core::ppn::PpnLimits;
use paraverse_core::pta;

use crate::CliError;

/// Exploration budgets shared by all subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_states: usize,
    pub max_depth: usize,
    pub token_cap: u64,
    pub valuation_bound: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 100_000,
            max_depth: 1000,
            token_cap: 200,
            valuation_bound: 5,
        }
    }
}

impl Limits {
    /// Applies `k=v,...` on top of `self`.
    pub fn apply(mut self, spec: &str, origin: &str) -> Result<Limits, CliError> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("{origin}: expected `key=value`, got `{item}`")))?;
            let n: u64 = value
                .trim()
                .parse()
                .ok()
                .filter(|n| *n > 0)
                .ok_or_else(|| CliError::Input(format!("{origin}: `{}` must be a positive integer", key.trim())))?;
            let as_usize = || {
                usize::try_from(n).map_err(|_| CliError::Input(format!("{origin}: `{}` is too large", key.trim())))
            };
            match key.trim() {
                "maxStates" => self.max_states = as_usize()?,
                "maxDepth" => self.max_depth = as_usize()?,
                "tokenCap" => self.token_cap = n,
                "valuationBound" => self.valuation_bound = n,
                other => {
                    return Err(CliError::Input(format!(
                        "{origin}: unknown limit `{other}` (known: maxStates, maxDepth, tokenCap, valuationBound)"
                    )))
                }
            }
        }
        Ok(self)
    }

    pub fn pta(&self) -> pta::Limits {
        pta::Limits {
            max_states: self.max_states,
            max_depth: self.max_depth,
        }
    }

    pub fn ppn(&self) -> PpnLimits {
        PpnLimits {
            max_states: self.max_states,
            token_cap: self.token_cap,
            valuation_bound: self.valuation_bound,
        }
    }
}
