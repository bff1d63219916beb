//! Front end over the four construction methods.

use pcm_core::construction::{construct_ga_from_rates, CodeSpec, ConstructionMethod, ConstructionParams};

use crate::error::Result;
use crate::parallel::construct_mc_par;
use crate::report::estimate_rates;

/// Sample budgets of the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Channel uses drawn to estimate the surrogate rates.
    pub samples: usize,
    /// Genie trials of the MC construction.
    pub trials: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            trials: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constructed {
    pub spec: CodeSpec,
    /// Only MC: the selection boundary is not resolved at 95% confidence.
    pub boundary_unresolved: bool,
}

pub fn construct(method: ConstructionMethod, params: &ConstructionParams, budget: Budget) -> Result<Constructed> {
    match method.rate_method() {
        Some(rate_method) => {
            let profile = estimate_rates(params.kind, params.snr_db, rate_method, budget.samples, params.seed)?;
            let (spec, _) = construct_ga_from_rates(method, params, &profile.rates)?;
            Ok(Constructed {
                spec,
                boundary_unresolved: false,
            })
        }
        None => {
            let mc = construct_mc_par(params, budget.trials)?;
            Ok(Constructed {
                spec: mc.spec,
                boundary_unresolved: mc.boundary_unresolved,
            })
        }
    }
}
