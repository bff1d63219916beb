//! Achievable-rate estimation for polar demapper bit channels.

mod jfun;
mod lm;
mod mi;
mod samples;

pub use jfun::{
    biawgn_capacity, j_fun, j_inv, j_inv_saturating, surrogate_sigma_from_rate, Mi, SurrogateSigma, H1, H2, H3,
    SURROGATE_RATE_EPS,
};
pub use lm::{gmi, lm_objective, lm_objective_with_error, lm_rate, LmEstimate, LmParams, Prior};
pub use mi::{mi_histogram, mi_histogram_estimate, mi_matched, DEFAULT_HISTOGRAM_BINS};
pub use samples::{sample_levels, sample_shard, LevelSamples, SHARD_LEN};

use alloc::vec::Vec;

use crate::demapper::DemapperKind;
use crate::polar::Llr;

/// One genie-conditioned demapper emission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePair {
    pub bit: u8,
    pub llr: Llr,
}

/// A rate with its statistical standard error, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub rate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateMethod {
    /// LM-rate of the demapper output, maximized over `(s, r)`.
    Lm,
    /// Generalized mutual information (`r ≡ 1`).
    Gmi,
    /// Plug-in histogram estimate of `I(Bj; Lj)`.
    MiHist,
    /// `1 - E[log2(1 + e^{-(1-2B)L})]`, valid for matched LLRs.
    MiMatched,
    /// Matched MI of the auxiliary label bits before polar demapping.
    AuxMi,
}

impl RateMethod {
    pub fn name(self) -> &'static str {
        match self {
            RateMethod::Lm => "lm",
            RateMethod::Gmi => "gmi",
            RateMethod::MiHist => "mi-hist",
            RateMethod::MiMatched => "mi-matched",
            RateMethod::AuxMi => "cga",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "lm" => Some(RateMethod::Lm),
            "gmi" => Some(RateMethod::Gmi),
            "mi-hist" => Some(RateMethod::MiHist),
            "mi-matched" => Some(RateMethod::MiMatched),
            "cga" | "aux-mi" => Some(RateMethod::AuxMi),
            _ => None,
        }
    }
}

/// Per-level rates of one demapper at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile {
    pub method: RateMethod,
    pub demapper: DemapperKind,
    pub snr_db: f64,
    pub samples: usize,
    pub rates: Vec<f64>,
    pub std_errors: Vec<f64>,
}

impl RateProfile {
    pub fn sum(&self) -> f64 {
        self.rates.iter().sum()
    }
}

/// Estimates the per-level rates of `samples` with `method`.
pub fn estimate_profile(
    samples: &LevelSamples,
    method: RateMethod,
    demapper: DemapperKind,
    snr_db: f64,
) -> crate::Result<RateProfile> {
    let source = if method == RateMethod::AuxMi {
        &samples.aux
    } else {
        &samples.polar
    };
    let mut rates = Vec::with_capacity(source.len());
    let mut std_errors = Vec::with_capacity(source.len());
    for level in source {
        let est = match method {
            RateMethod::Lm => {
                let e = lm_rate(level, Prior::UNIFORM)?;
                RateEstimate {
                    rate: e.rate,
                    std_error: e.std_error,
                }
            }
            RateMethod::Gmi => {
                let e = gmi(level, Prior::UNIFORM)?;
                RateEstimate {
                    rate: e.rate,
                    std_error: e.std_error,
                }
            }
            RateMethod::MiHist => mi_histogram_estimate(level, DEFAULT_HISTOGRAM_BINS),
            RateMethod::MiMatched | RateMethod::AuxMi => mi_matched(level),
        };
        rates.push(est.rate);
        std_errors.push(est.std_error);
    }
    Ok(RateProfile {
        method,
        demapper,
        snr_db,
        samples: samples.len(),
        rates,
        std_errors,
    })
}
