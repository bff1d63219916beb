//! Rate profiles: estimation at an SNR and their JSON / CSV renderings.

use pcm_core::demapper::{Demapper, DemapperKind};
use pcm_core::modulation::{snr_to_sigma, Constellation};
use pcm_core::rates::{estimate_profile, RateMethod, RateProfile};
use serde::Serialize;

use crate::error::Result;
use crate::parallel::sample_levels_par;

/// Draws `samples` channel uses at `snr_db` and estimates the per-level rates.
pub fn estimate_rates(
    kind: DemapperKind,
    snr_db: f64,
    method: RateMethod,
    samples: usize,
    seed: u64,
) -> Result<RateProfile> {
    if samples == 0 {
        return Err(pcm_core::Error::EmptySamples.into());
    }
    let sigma = snr_to_sigma(snr_db, &Constellation::new(3)?);
    let demapper = Demapper::new(kind, sigma)?;
    let data = sample_levels_par(&demapper, seed, samples);
    Ok(estimate_profile(&data, method, kind, snr_db)?)
}

#[derive(Debug, Serialize)]
struct JsonProfile<'a> {
    demapper: &'a str,
    method: &'a str,
    snr_db: f64,
    samples: usize,
    seed: u64,
    levels: Vec<JsonLevel>,
    sum: f64,
}

#[derive(Debug, Serialize)]
struct JsonLevel {
    level: usize,
    rate: f64,
    stderr: f64,
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    demapper: &'a str,
    level: usize,
    method: &'a str,
    snr_db: f64,
    rate: f64,
    samples: usize,
    stderr: f64,
}

pub fn profile_json(profile: &RateProfile, seed: u64) -> Result<String> {
    let doc = JsonProfile {
        demapper: profile.demapper.name(),
        method: profile.method.name(),
        snr_db: profile.snr_db,
        samples: profile.samples,
        seed,
        levels: profile
            .rates
            .iter()
            .zip(&profile.std_errors)
            .enumerate()
            .map(|(j, (&rate, &stderr))| JsonLevel {
                level: j + 1,
                rate,
                stderr,
            })
            .collect(),
        sum: profile.sum(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// One row per level; levels are numbered from 1.
pub fn profile_csv(profile: &RateProfile) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (j, (&rate, &stderr)) in profile.rates.iter().zip(&profile.std_errors).enumerate() {
        w.serialize(CsvRow {
            demapper: profile.demapper.name(),
            level: j + 1,
            method: profile.method.name(),
            snr_db: profile.snr_db,
            rate,
            samples: profile.samples,
            stderr,
        })?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
