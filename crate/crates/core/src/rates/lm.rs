//! LM-rate of a binary input `B` observed through a soft value `L` with the
//! metric `q(L, B) = exp(-(L/2)(1 - 2B))`:
//!
//! ```text
//! R(s, r) = E[ log2( q(L,B)^s r(B) / Σ_b P_B(b) q(L,b)^s r(b) ) ]
//! ```
//!
//! with `r(0) = 1`, `r(1) = e^ρ`. The LM-rate maximizes over `(s, ρ)`, the
//! GMI over `s` with `ρ = 0`.

use alloc::vec::Vec;

use super::SamplePair;
use crate::math::{self, MeanAccumulator};
use crate::polar::LLR_MAX;
use crate::{Error, Result};

/// Input distribution `P_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prior {
    pub p0: f64,
}

impl Prior {
    pub const UNIFORM: Prior = Prior { p0: 0.5 };

    pub fn new(p0: f64) -> Result<Self> {
        if !(p0 > 0.0 && p0 < 1.0) {
            return Err(Error::InvalidParameter("prior must be strictly positive"));
        }
        Ok(Self { p0 })
    }

    fn ln_probs(self) -> [f64; 2] {
        [math::ln(self.p0), math::ln_1p(-self.p0)]
    }
}

/// Metric exponent `s ≥ 0` and input weighting `ρ = ln r(1) - ln r(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmParams {
    pub s: f64,
    pub rho: f64,
}

/// Result of an LM-rate or GMI maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmEstimate {
    pub rate: f64,
    pub std_error: f64,
    pub params: LmParams,
    /// The maximizer sits on the boundary of the search box.
    pub at_boundary: bool,
}

/// Per-sample rate term in nats.
///
/// With `d = (1-2B)(ρ - sL)` the term is `-ln(P(B) + P(B̄) e^{d})`.
#[inline]
fn term_nats(ln_p: [f64; 2], bit: u8, llr: f64, p: LmParams) -> f64 {
    let d0 = p.rho - p.s * llr;
    let (own, other, d) = if bit == 0 {
        (ln_p[0], ln_p[1], d0)
    } else {
        (ln_p[1], ln_p[0], -d0)
    };
    -math::log_add_exp(own, other + d)
}

/// Sample-mean estimate of `R(s, r)` in bits.
pub fn lm_objective(samples: &[SamplePair], prior: Prior, params: LmParams) -> Result<f64> {
    lm_objective_with_error(samples, prior, params).map(|(r, _)| r)
}

/// [`lm_objective`] with the standard error of the sample mean.
pub fn lm_objective_with_error(samples: &[SamplePair], prior: Prior, params: LmParams) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(params.s >= 0.0) {
        return Err(Error::InvalidParameter("s must be nonnegative"));
    }
    let ln_p = prior.ln_probs();
    let mut acc = MeanAccumulator::new();
    for s in samples {
        acc.push(term_nats(ln_p, s.bit, s.llr, params));
    }
    Ok((acc.mean() / math::LN_2, acc.std_error() / math::LN_2))
}

const S_MIN: f64 = 0.05;
const S_MAX: f64 = 4.0;
const RHO_MIN: f64 = -5.0;
const RHO_MAX: f64 = 5.0;
const GRID: usize = 33;
const TOLERANCE: f64 = 1e-5;
const HIST_BINS: usize = 16_000;

/// Binned stand-in for the samples used to locate the maximizer quickly.
struct Binned {
    /// `(bit, llr, weight)`.
    cells: Vec<(u8, f64, f64)>,
}

impl Binned {
    fn new(samples: &[SamplePair]) -> Self {
        let width = 2.0 * LLR_MAX / HIST_BINS as f64;
        let mut counts = alloc::vec![[0u64; 2]; HIST_BINS];
        let mut sums = alloc::vec![[0.0f64; 2]; HIST_BINS];
        for s in samples {
            let k = (((s.llr + LLR_MAX) / width) as isize).clamp(0, HIST_BINS as isize - 1) as usize;
            let b = (s.bit & 1) as usize;
            counts[k][b] += 1;
            sums[k][b] += s.llr;
        }
        let n = samples.len() as f64;
        let mut cells = Vec::new();
        for k in 0..HIST_BINS {
            for b in 0..2 {
                if counts[k][b] > 0 {
                    let c = counts[k][b] as f64;
                    cells.push((b as u8, sums[k][b] / c, c / n));
                }
            }
        }
        Self { cells }
    }

    fn objective(&self, ln_p: [f64; 2], p: LmParams) -> f64 {
        let mut acc = math::KahanSum::new();
        for &(bit, llr, w) in &self.cells {
            acc.add(w * term_nats(ln_p, bit, llr, p));
        }
        acc.value() / math::LN_2
    }
}

/// Golden-section maximization of a unimodal-on-bracket function.
fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    while hi - lo > x_tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        }
    }
    if fa > fb {
        (a, fa)
    } else {
        (b, fb)
    }
}

/// Coordinate-wise refinement in `(ln s, ρ)` starting from `start`.
fn refine<F: FnMut(LmParams) -> f64>(
    mut f: F,
    start: LmParams,
    mut best: f64,
    step: (f64, f64),
    optimize_rho: bool,
    rounds: usize,
) -> (LmParams, f64) {
    let (ls_min, ls_max) = (math::ln(S_MIN), math::ln(S_MAX));
    let mut p = start;
    for _ in 0..rounds {
        let before = best;
        let ls = math::ln(p.s);
        let (x, v) = golden_max(
            |x| f(LmParams { s: math::exp(x), rho: p.rho }),
            (ls - step.0).max(ls_min),
            (ls + step.0).min(ls_max),
            1e-7,
        );
        if v > best {
            best = v;
            p.s = math::exp(x);
        }
        if optimize_rho {
            let (x, v) = golden_max(
                |x| f(LmParams { s: p.s, rho: x }),
                (p.rho - step.1).max(RHO_MIN),
                (p.rho + step.1).min(RHO_MAX),
                1e-7,
            );
            if v > best {
                best = v;
                p.rho = x;
            }
        }
        if best - before < TOLERANCE * 1e-2 {
            break;
        }
    }
    (p, best)
}

fn maximize(samples: &[SamplePair], prior: Prior, optimize_rho: bool) -> Result<LmEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let ln_p = prior.ln_probs();
    let binned = Binned::new(samples);
    let ls_step = (math::ln(S_MAX) - math::ln(S_MIN)) / (GRID - 1) as f64;
    let rho_step = (RHO_MAX - RHO_MIN) / (GRID - 1) as f64;

    let mut best = LmParams { s: 1.0, rho: 0.0 };
    let mut best_val = f64::NEG_INFINITY;
    let rho_points = if optimize_rho { GRID } else { 1 };
    for i in 0..GRID {
        let s = math::exp(math::ln(S_MIN) + i as f64 * ls_step);
        for j in 0..rho_points {
            let rho = if optimize_rho { RHO_MIN + j as f64 * rho_step } else { 0.0 };
            let p = LmParams { s, rho };
            let v = binned.objective(ln_p, p);
            if v > best_val {
                best_val = v;
                best = p;
            }
        }
    }

    // Locate the maximizer on the binned objective, then polish on the samples.
    let (coarse, _) = refine(
        |p| binned.objective(ln_p, p),
        best,
        best_val,
        (ls_step, rho_step),
        optimize_rho,
        50,
    );
    let exact = |p: LmParams| {
        let mut acc = math::KahanSum::new();
        for s in samples {
            acc.add(term_nats(ln_p, s.bit, s.llr, p));
        }
        acc.value() / samples.len() as f64 / math::LN_2
    };
    let start_val = exact(coarse);
    let (params, _) = refine(exact, coarse, start_val, (ls_step / 8.0, rho_step / 8.0), optimize_rho, 4);
    let (rate, std_error) = lm_objective_with_error(samples, prior, params)?;

    let edge = |x: f64, lo: f64, hi: f64| (x - lo).abs() < 1e-6 * (hi - lo) || (hi - x).abs() < 1e-6 * (hi - lo);
    let at_boundary = edge(math::ln(params.s), math::ln(S_MIN), math::ln(S_MAX))
        || (optimize_rho && edge(params.rho, RHO_MIN, RHO_MAX));
    Ok(LmEstimate {
        rate,
        std_error,
        params,
        at_boundary,
    })
}

/// LM-rate: `max_{s, ρ} R(s, r)`.
///
/// A 33×33 grid over `s ∈ [0.05, 4]` (log-spaced) and `ρ ∈ [-5, 5]` is
/// followed by coordinate-wise golden-section refinement.
pub fn lm_rate(samples: &[SamplePair], prior: Prior) -> Result<LmEstimate> {
    maximize(samples, prior, true)
}

/// Generalized mutual information: `max_s R(s, 1)`.
pub fn gmi(samples: &[SamplePair], prior: Prior) -> Result<LmEstimate> {
    maximize(samples, prior, false)
}
