use alloc::vec::Vec;

use super::{RateEstimate, SamplePair};
use crate::math::{self, MeanAccumulator};
use crate::polar::LLR_MAX;

pub const DEFAULT_HISTOGRAM_BINS: usize = 2000;

/// `1 - E[log2(1 + e^{-(1-2B)L})]`: the mutual information `I(B; L)` when
/// `L` is the true posterior LLR of a uniform bit.
pub fn mi_matched(samples: &[SamplePair]) -> RateEstimate {
    let mut acc = MeanAccumulator::new();
    for s in samples {
        let signed = if s.bit == 0 { s.llr } else { -s.llr };
        acc.push(1.0 - math::softplus(-signed) / math::LN_2);
    }
    RateEstimate {
        rate: acc.mean(),
        std_error: acc.std_error(),
    }
}

/// Plug-in estimate of `I(B; L)` with `L` quantized to `bins` equal cells on
/// `[-LLR_MAX, LLR_MAX]`. Empty cells contribute nothing.
pub fn mi_histogram(samples: &[SamplePair], bins: usize) -> f64 {
    let Some(h) = Histogram::new(samples, bins) else {
        return 0.0;
    };
    let n = samples.len() as f64;
    let mut acc = math::KahanSum::new();
    for c in &h.counts {
        for b in 0..2 {
            if c[b] > 0 {
                acc.add(c[b] as f64 / n * h.density(c, b));
            }
        }
    }
    acc.value()
}

/// [`mi_histogram`] with the standard error of the mean of the per-sample
/// plug-in information density.
pub fn mi_histogram_estimate(samples: &[SamplePair], bins: usize) -> RateEstimate {
    let Some(h) = Histogram::new(samples, bins) else {
        return RateEstimate {
            rate: 0.0,
            std_error: 0.0,
        };
    };
    let mut acc = MeanAccumulator::new();
    for s in samples {
        let b = (s.bit & 1) as usize;
        acc.push(h.density(&h.counts[h.cell(s.llr)], b));
    }
    RateEstimate {
        rate: mi_histogram(samples, bins),
        std_error: acc.std_error(),
    }
}

struct Histogram {
    counts: Vec<[u64; 2]>,
    bit_totals: [u64; 2],
    width: f64,
    n: f64,
}

impl Histogram {
    fn new(samples: &[SamplePair], bins: usize) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let bins = bins.max(2);
        let mut h = Histogram {
            counts: alloc::vec![[0, 0]; bins],
            bit_totals: [0, 0],
            width: 2.0 * LLR_MAX / bins as f64,
            n: samples.len() as f64,
        };
        for s in samples {
            let k = h.cell(s.llr);
            h.counts[k][(s.bit & 1) as usize] += 1;
            h.bit_totals[(s.bit & 1) as usize] += 1;
        }
        Some(h)
    }

    fn cell(&self, llr: f64) -> usize {
        let k = ((llr + LLR_MAX) / self.width) as isize;
        k.clamp(0, self.counts.len() as isize - 1) as usize
    }

    /// `log2(P(b, cell) / (P(cell) P(b)))` for a non-empty `(cell, b)`.
    fn density(&self, c: &[u64; 2], b: usize) -> f64 {
        let cell = (c[0] + c[1]) as f64;
        math::log2(c[b] as f64 * self.n / (cell * self.bit_totals[b] as f64))
    }
}
