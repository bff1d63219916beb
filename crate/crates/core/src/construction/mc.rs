//! Monte Carlo construction: genie-aided simulation of the whole chain.
//!
//! Every trial sends uniformly random bits on all positions. Each level is
//! demapped with the true bits of the earlier levels and SC-decoded with the
//! true earlier bits of the same level, and every wrong hard decision is
//! counted against its `(level, position)` bit channel.

use alloc::vec::Vec;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{CodeSpec, ConstructionMethod, ConstructionParams, ReliabilityTable};
use crate::demapper::Demapper;
use crate::math;
use crate::modulation::{snr_to_sigma, Constellation};
use crate::polar::{polar_transform_in_place, sc_genie_errors, ScScratch};
use crate::rng::stream_rng;
use crate::{Error, Result};

/// Error counts per bit channel; merging is associative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McCounts {
    pub trials: u64,
    pub errors: Vec<Vec<u64>>,
}

impl McCounts {
    pub fn new(m: usize, n: usize) -> Self {
        Self {
            trials: 0,
            errors: alloc::vec![alloc::vec![0; n]; m],
        }
    }

    pub fn merge(&mut self, other: &McCounts) {
        self.trials += other.trials;
        for (a, b) in self.errors.iter_mut().zip(&other.errors) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += *y;
            }
        }
    }

    pub fn error_probabilities(&self) -> Vec<Vec<f64>> {
        let t = self.trials.max(1) as f64;
        self.errors
            .iter()
            .map(|l| l.iter().map(|&e| e as f64 / t).collect())
            .collect()
    }
}

/// Runs genie trial `trial` of `seed` and adds its errors to `counts`.
pub fn mc_trial(demapper: &Demapper, n: usize, seed: u64, trial: u64, counts: &mut McCounts, scratch: &mut ScScratch) {
    let m = demapper.levels();
    let map = demapper.map();
    let mut rng = stream_rng(seed, trial);
    let mut u = alloc::vec![alloc::vec![0u8; n]; m];
    let mut c = u.clone();
    for j in 0..m {
        for b in u[j].iter_mut() {
            *b = rng.random_range(0..2u8);
        }
        c[j].copy_from_slice(&u[j]);
        polar_transform_in_place(&mut c[j]).expect("n is a power of two");
    }
    let sigma = demapper.sigma();
    let mut llrs = alloc::vec![alloc::vec![0.0; n]; m];
    let mut out = [0.0; 8];
    for i in 0..n {
        let label = c.iter().fold(0u32, |acc, level| (acc << 1) | level[i] as u32);
        let z: f64 = StandardNormal.sample(&mut rng);
        let y = map.map_symbol(label) + sigma * z;
        demapper.demap_genie(y, label, &mut out[..m]);
        for j in 0..m {
            llrs[j][i] = out[j];
        }
    }
    for j in 0..m {
        sc_genie_errors(&llrs[j], &u[j], &mut counts.errors[j], scratch).expect("consistent lengths");
    }
    counts.trials += 1;
}

/// Outcome of a Monte Carlo construction.
#[derive(Debug, Clone, PartialEq)]
pub struct McConstruction {
    pub spec: CodeSpec,
    pub table: ReliabilityTable,
    pub counts: McCounts,
    /// The 95% confidence intervals of the last selected and the first
    /// rejected bit channel overlap: more trials are needed to resolve the
    /// boundary.
    pub boundary_unresolved: bool,
}

/// Builds the code from accumulated genie counts.
pub fn mc_from_counts(params: &ConstructionParams, counts: McCounts) -> Result<McConstruction> {
    let m = counts.errors.len();
    if params.k > m * params.n {
        return Err(Error::DimensionTooLarge {
            k: params.k,
            total: m * params.n,
        });
    }
    let table = ReliabilityTable::ErrorProbability(counts.error_probabilities());
    let masks = table.select(params.n, params.k)?;
    let ranking = table.ranking();
    let boundary_unresolved = if params.k == 0 || params.k >= ranking.len() {
        false
    } else {
        let t = counts.trials.max(1) as f64;
        let interval = |(j, i): (usize, usize)| {
            let p = counts.errors[j][i] as f64 / t;
            let half = 1.96 * math::sqrt((p * (1.0 - p)).max(1.0 / t) / t);
            (p - half, p + half)
        };
        let last_in = interval(ranking[params.k - 1]);
        let first_out = interval(ranking[params.k]);
        last_in.1 >= first_out.0
    };
    let spec = CodeSpec {
        m,
        n: params.n,
        k: params.k,
        masks,
        method: ConstructionMethod::Mc,
        demapper: params.kind,
        label_kind: params.kind.label_kind(),
        snr_db: params.snr_db,
        crc: params.crc,
        rates: Vec::new(),
        surrogate_sigmas: Vec::new(),
        seed: params.seed,
    };
    spec.validate()?;
    Ok(McConstruction {
        spec,
        table,
        counts,
        boundary_unresolved,
    })
}

/// Sequential Monte Carlo construction with `trials` genie trials.
pub fn construct_mc(params: &ConstructionParams, trials: u64) -> Result<McConstruction> {
    if trials < 1 {
        return Err(Error::InvalidParameter("at least one trial is required"));
    }
    crate::polar::check_power_of_two(params.n)?;
    let constellation = Constellation::new(3)?;
    let demapper = Demapper::new(params.kind, snr_to_sigma(params.snr_db, &constellation))?;
    let mut counts = McCounts::new(demapper.levels(), params.n);
    let mut scratch = ScScratch::new();
    for t in 0..trials {
        mc_trial(&demapper, params.n, params.seed, t, &mut counts, &mut scratch);
    }
    mc_from_counts(params, counts)
}
