//! The J-function `J(σ) = I(B; L)` for a consistent Gaussian LLR
//! `L ~ N(σ²/2, σ²)`, in the closed-form approximation
//! `J(σ) ≈ (1 - 2^{-H1 σ^{2 H2}})^{H3}` and its closed-form inverse.

use core::cmp::Ordering;

use crate::math;
use crate::{Error, Result};

pub const H1: f64 = 0.3073;
pub const H2: f64 = 0.8935;
pub const H3: f64 = 1.1064;

/// A mutual information in `[0, 1]` stored together with its complement, so
/// that values close to 1 keep full relative precision in `1 - I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mi {
    value: f64,
    complement: f64,
}

impl Mi {
    pub const ZERO: Mi = Mi {
        value: 0.0,
        complement: 1.0,
    };
    pub const ONE: Mi = Mi {
        value: 1.0,
        complement: 0.0,
    };

    /// From `I`; values outside `[0, 1]` are clamped.
    pub fn new(value: f64) -> Self {
        let v = value.clamp(0.0, 1.0);
        Self {
            value: v,
            complement: 1.0 - v,
        }
    }

    /// From `1 - I`.
    pub fn from_complement(complement: f64) -> Self {
        let c = complement.clamp(0.0, 1.0);
        Self {
            value: 1.0 - c,
            complement: c,
        }
    }

    pub fn value(self) -> f64 {
        self.value
    }

    /// `1 - I`, accurate even when `I` rounds to 1.
    pub fn complement(self) -> f64 {
        self.complement
    }

    /// The information `1 - I` as an [`Mi`].
    pub fn flip(self) -> Self {
        Self {
            value: self.complement,
            complement: self.value,
        }
    }

    /// Total order by information, resolving values near 1 through the
    /// complement.
    pub fn cmp_info(&self, other: &Mi) -> Ordering {
        if self.value > 0.5 && other.value > 0.5 {
            other.complement.total_cmp(&self.complement)
        } else {
            self.value.total_cmp(&other.value)
        }
    }
}

impl From<f64> for Mi {
    fn from(v: f64) -> Self {
        Mi::new(v)
    }
}

/// `J(σ)` for `σ ≥ 0`; negative inputs are treated as 0.
pub fn j_fun(sigma: f64) -> Mi {
    let sigma = sigma.max(0.0);
    let t = math::exp2(-H1 * math::powf(sigma, 2.0 * H2));
    let log_value = H3 * math::ln_1p(-t);
    Mi {
        value: math::exp(log_value),
        complement: -math::exp_m1(log_value),
    }
}

/// `J^{-1}(I)` for `I ∈ [0, 1)`.
pub fn j_inv(info: impl Into<Mi>) -> Result<f64> {
    let info = info.into();
    if !(info.value >= 0.0) || !(info.complement > 0.0) || info.value.is_nan() {
        return Err(Error::InvalidMutualInformation(info.value));
    }
    Ok(j_inv_saturating(info))
}

/// `J^{-1}` extended by `J^{-1}(1) = ∞`.
pub fn j_inv_saturating(info: Mi) -> f64 {
    if info.value <= 0.0 {
        return 0.0;
    }
    if info.complement <= 0.0 {
        return f64::INFINITY;
    }
    // w = 1 - I^{1/H3}
    let w = if info.value <= 0.5 {
        -math::exp_m1(math::ln(info.value) / H3)
    } else {
        -math::exp_m1(math::ln_1p(-info.complement) / H3)
    };
    math::powf(-math::log2(w) / H1, 1.0 / (2.0 * H2))
}

/// Outcome of mapping a rate to a biAWGN surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateSigma {
    /// Noise standard deviation of the biAWGN with capacity equal to the rate.
    pub sigma: f64,
    /// Whether the rate had to be clamped into `[1e-6, 1 - 1e-6]`.
    pub clamped: bool,
}

pub const SURROGATE_RATE_EPS: f64 = 1e-6;

/// Noise level `σ` of the biAWGN channel whose capacity equals `rate`.
///
/// The biAWGN LLR is Gaussian with variance `4/σ²`, so its capacity is
/// `J(2/σ)` and `σ = 2 / J^{-1}(rate)`.
pub fn surrogate_sigma_from_rate(rate: f64) -> SurrogateSigma {
    let clamped_rate = rate.clamp(SURROGATE_RATE_EPS, 1.0 - SURROGATE_RATE_EPS);
    let clamped = clamped_rate != rate || rate.is_nan();
    let clamped_rate = if rate.is_nan() { SURROGATE_RATE_EPS } else { clamped_rate };
    SurrogateSigma {
        sigma: 2.0 / j_inv_saturating(Mi::new(clamped_rate)),
        clamped,
    }
}

/// Capacity of the biAWGN channel with noise level `sigma`, via `J(2/σ)`.
pub fn biawgn_capacity(sigma: f64) -> f64 {
    j_fun(2.0 / sigma).value()
}
