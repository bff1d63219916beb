//! Multi-threaded versions of the sampling and Monte Carlo construction
//! loops. Work is split into fixed shards seeded by index, so results do not
//! depend on the number of worker threads.

use pcm_core::construction::{mc_from_counts, mc_trial, ConstructionParams, McConstruction, McCounts};
use pcm_core::demapper::Demapper;
use pcm_core::modulation::{snr_to_sigma, Constellation};
use pcm_core::polar::ScScratch;
use pcm_core::rates::{sample_shard, LevelSamples, SHARD_LEN};
use rayon::prelude::*;

use crate::error::{Result, SimError};

/// Same samples as [`pcm_core::rates::sample_levels`], drawn in parallel.
pub fn sample_levels_par(demapper: &Demapper, seed: u64, count: usize) -> LevelSamples {
    let shards = count.div_ceil(SHARD_LEN);
    let parts: Vec<LevelSamples> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let len = SHARD_LEN.min(count - s * SHARD_LEN);
            sample_shard(demapper, seed, s as u64, len)
        })
        .collect();
    let mut out = LevelSamples::with_levels(demapper.levels(), count);
    for p in parts {
        out.append(p);
    }
    out
}

const TRIALS_PER_TASK: u64 = 512;

/// Genie counts of trials `0..trials`, identical to the sequential loop.
pub fn mc_counts_par(demapper: &Demapper, n: usize, seed: u64, trials: u64) -> McCounts {
    let tasks = trials.div_ceil(TRIALS_PER_TASK);
    (0..tasks)
        .into_par_iter()
        .map(|t| {
            let mut counts = McCounts::new(demapper.levels(), n);
            let mut scratch = ScScratch::new();
            let end = ((t + 1) * TRIALS_PER_TASK).min(trials);
            for trial in t * TRIALS_PER_TASK..end {
                mc_trial(demapper, n, seed, trial, &mut counts, &mut scratch);
            }
            counts
        })
        .reduce(
            || McCounts::new(demapper.levels(), n),
            |mut a, b| {
                a.merge(&b);
                a
            },
        )
}

/// Parallel Monte Carlo construction; same result as
/// [`pcm_core::construction::construct_mc`].
pub fn construct_mc_par(params: &ConstructionParams, trials: u64) -> Result<McConstruction> {
    if trials < 1 {
        return Err(SimError::Config("at least one MC trial is required".into()));
    }
    let sigma = snr_to_sigma(params.snr_db, &Constellation::new(3)?);
    let demapper = Demapper::new(params.kind, sigma)?;
    if !params.n.is_power_of_two() {
        return Err(pcm_core::Error::InvalidLength(params.n).into());
    }
    let counts = mc_counts_par(&demapper, params.n, params.seed, trials);
    Ok(mc_from_counts(params, counts)?)
}
