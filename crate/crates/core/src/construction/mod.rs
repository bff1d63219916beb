//! Frozen-set construction.
//!
//! The surrogate methods replace every bit level of the modulation by a
//! binary-input AWGN channel of the same rate and run the Gaussian
//! approximation through the polar transform:
//!
//! * CGA takes the rates of the auxiliary label bits before the demapper and
//!   carries them through the demapper's XOR network with the same GA rules;
//! * MI-DGA takes the mutual information of each demapper output;
//! * LM-DGA takes the LM-rate of each demapper output.
//!
//! Monte Carlo construction measures the genie-aided bit-channel error rates
//! of the whole chain instead.

mod ga;
mod mc;

pub use ga::{ga_check, ga_evolve, ga_variable};
pub use mc::{construct_mc, mc_from_counts, mc_trial, McConstruction, McCounts};

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::demapper::{Demapper, DemapperKind};
use crate::modulation::LabelKind;
use crate::polar::{check_power_of_two, CrcConfig, FrozenMask};
use crate::rates::{self, estimate_profile, surrogate_sigma_from_rate, Mi, RateMethod};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructionMethod {
    Cga,
    MiDga,
    LmDga,
    Mc,
}

impl ConstructionMethod {
    pub fn name(self) -> &'static str {
        match self {
            ConstructionMethod::Cga => "cga",
            ConstructionMethod::MiDga => "mi-dga",
            ConstructionMethod::LmDga => "lm-dga",
            ConstructionMethod::Mc => "mc",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "cga" => Some(ConstructionMethod::Cga),
            "mi-dga" => Some(ConstructionMethod::MiDga),
            "lm-dga" => Some(ConstructionMethod::LmDga),
            "mc" => Some(ConstructionMethod::Mc),
            _ => None,
        }
    }

    /// Rate estimator feeding the surrogate channels.
    pub fn rate_method(self) -> Option<RateMethod> {
        match self {
            ConstructionMethod::Cga => Some(RateMethod::AuxMi),
            ConstructionMethod::MiDga => Some(RateMethod::MiHist),
            ConstructionMethod::LmDga => Some(RateMethod::Lm),
            ConstructionMethod::Mc => None,
        }
    }
}

/// A multilevel polar code: one frozen mask per bit level.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub masks: Vec<FrozenMask>,
    pub method: ConstructionMethod,
    pub demapper: DemapperKind,
    pub label_kind: LabelKind,
    pub snr_db: f64,
    pub crc: Option<CrcConfig>,
    /// Per-level rates the construction started from (empty for MC).
    pub rates: Vec<f64>,
    /// Per-level biAWGN surrogate noise levels (empty for MC).
    pub surrogate_sigmas: Vec<f64>,
    pub seed: u64,
}

impl CodeSpec {
    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        check_power_of_two(self.n)?;
        if self.masks.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                actual: self.masks.len(),
            });
        }
        for mask in &self.masks {
            if mask.len() != self.n {
                return Err(Error::LengthMismatch {
                    expected: self.n,
                    actual: mask.len(),
                });
            }
        }
        let dim: usize = self.masks.iter().map(FrozenMask::dimension).sum();
        if dim != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: dim,
            });
        }
        if let Some(crc) = self.crc {
            if (crc.width as usize) > self.k {
                return Err(Error::InvalidParameter("CRC longer than the code dimension"));
            }
        }
        Ok(())
    }

    /// Unfrozen positions as global indices `level * n + position`, ascending.
    pub fn info_positions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.k);
        for (j, mask) in self.masks.iter().enumerate() {
            out.extend(mask.info_indices().into_iter().map(|i| j * self.n + i));
        }
        out
    }

    /// Number of payload bits: `k` minus the CRC bits.
    pub fn payload_len(&self) -> usize {
        self.k - self.crc.map_or(0, |c| c.width as usize)
    }

    pub fn total_len(&self) -> usize {
        self.m * self.n
    }
}

/// Reliability of every `(level, position)` bit channel.
#[derive(Debug, Clone, PartialEq)]
pub enum ReliabilityTable {
    /// GA mutual information; larger is more reliable.
    Information(Vec<Vec<Mi>>),
    /// Estimated bit-channel error probability; smaller is more reliable.
    ErrorProbability(Vec<Vec<f64>>),
}

impl ReliabilityTable {
    pub fn levels(&self) -> usize {
        match self {
            ReliabilityTable::Information(t) => t.len(),
            ReliabilityTable::ErrorProbability(t) => t.len(),
        }
    }

    /// Scores as plain numbers (MI or error probability).
    pub fn scores(&self) -> Vec<Vec<f64>> {
        match self {
            ReliabilityTable::Information(t) => t.iter().map(|l| l.iter().map(|m| m.value()).collect()).collect(),
            ReliabilityTable::ErrorProbability(t) => t.clone(),
        }
    }

    /// `Less` when `a` is more reliable than `b`.
    fn cmp_entries(&self, a: (usize, usize), b: (usize, usize)) -> Ordering {
        let by_score = match self {
            ReliabilityTable::Information(t) => t[b.0][b.1].cmp_info(&t[a.0][a.1]),
            ReliabilityTable::ErrorProbability(t) => t[a.0][a.1].total_cmp(&t[b.0][b.1]),
        };
        // Ties favour the higher level, then the higher position.
        by_score.then(b.0.cmp(&a.0)).then(b.1.cmp(&a.1))
    }

    /// All `(level, position)` pairs, most reliable first.
    pub fn ranking(&self) -> Vec<(usize, usize)> {
        let mut all: Vec<(usize, usize)> = Vec::new();
        match self {
            ReliabilityTable::Information(t) => {
                for (j, l) in t.iter().enumerate() {
                    all.extend((0..l.len()).map(|i| (j, i)));
                }
            }
            ReliabilityTable::ErrorProbability(t) => {
                for (j, l) in t.iter().enumerate() {
                    all.extend((0..l.len()).map(|i| (j, i)));
                }
            }
        }
        all.sort_by(|&a, &b| self.cmp_entries(a, b));
        all
    }

    /// Frozen masks keeping the `k` most reliable positions over all levels.
    pub fn select(&self, n: usize, k: usize) -> Result<Vec<FrozenMask>> {
        let m = self.levels();
        if k > m * n {
            return Err(Error::DimensionTooLarge { k, total: m * n });
        }
        let mut frozen = alloc::vec![alloc::vec![true; n]; m];
        for &(j, i) in self.ranking().iter().take(k) {
            frozen[j][i] = false;
        }
        Ok(frozen.into_iter().map(FrozenMask::new).collect())
    }
}

/// Per-level input MIs of the surrogate GA for `method`, from the rates its
/// estimator produced.
///
/// For CGA the auxiliary-label rates pass through the 8-ASK label transform
/// `b̃1 = b1⊕b2, b̃2 = b2⊕b3, b̃3 = b3` (the demapper's own network); the DGA
/// methods use their rates directly.
pub fn surrogate_level_mi(method: ConstructionMethod, rates: &[f64]) -> Result<Vec<Mi>> {
    match method {
        ConstructionMethod::MiDga | ConstructionMethod::LmDga => {
            Ok(rates.iter().map(|&r| Mi::new(r)).collect())
        }
        ConstructionMethod::Cga => {
            if rates.len() != 3 {
                return Err(Error::Unsupported("CGA network is defined for 8-ASK"));
            }
            let aux: Vec<Mi> = rates.iter().map(|&r| Mi::new(r)).collect();
            let tail = ga_check(aux[1], aux[2]);
            Ok(alloc::vec![
                ga_check(aux[0], tail),
                ga_variable(aux[0], tail),
                ga_variable(aux[1], aux[2]),
            ])
        }
        ConstructionMethod::Mc => Err(Error::Unsupported("MC construction has no surrogate")),
    }
}

/// GA reliability table from per-level input MIs.
pub fn ga_table(level_mi: &[Mi], n: usize) -> Result<ReliabilityTable> {
    let levels = level_mi
        .iter()
        .map(|&mi| ga_evolve(mi, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReliabilityTable::Information(levels))
}

/// Parameters shared by all constructions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructionParams {
    pub kind: DemapperKind,
    pub snr_db: f64,
    pub n: usize,
    pub k: usize,
    pub crc: Option<CrcConfig>,
    pub seed: u64,
}

/// Surrogate construction from rates estimated elsewhere. `rates` are the
/// outputs of `method.rate_method()`.
pub fn construct_ga_from_rates(
    method: ConstructionMethod,
    params: &ConstructionParams,
    rates: &[f64],
) -> Result<(CodeSpec, ReliabilityTable)> {
    check_power_of_two(params.n)?;
    let m = rates.len();
    if params.k > m * params.n {
        return Err(Error::DimensionTooLarge {
            k: params.k,
            total: m * params.n,
        });
    }
    let level_mi = surrogate_level_mi(method, rates)?;
    let table = ga_table(&level_mi, params.n)?;
    let masks = table.select(params.n, params.k)?;
    let spec = CodeSpec {
        m,
        n: params.n,
        k: params.k,
        masks,
        method,
        demapper: params.kind,
        label_kind: params.kind.label_kind(),
        snr_db: params.snr_db,
        crc: params.crc,
        rates: rates.to_vec(),
        surrogate_sigmas: level_mi
            .iter()
            .map(|mi| surrogate_sigma_from_rate(mi.value()).sigma)
            .collect(),
        seed: params.seed,
    };
    spec.validate()?;
    Ok((spec, table))
}

/// Surrogate construction with `samples` genie-conditioned demapper samples
/// drawn from `params.seed`.
pub fn construct_ga(
    method: ConstructionMethod,
    params: &ConstructionParams,
    samples: usize,
) -> Result<(CodeSpec, ReliabilityTable)> {
    let rate_method = method
        .rate_method()
        .ok_or(Error::Unsupported("MC is not a surrogate construction"))?;
    let m = 3;
    if params.k > m * params.n {
        return Err(Error::DimensionTooLarge {
            k: params.k,
            total: m * params.n,
        });
    }
    let constellation = crate::modulation::Constellation::new(m as u32)?;
    let sigma = crate::modulation::snr_to_sigma(params.snr_db, &constellation);
    let demapper = Demapper::new(params.kind, sigma)?;
    let data = rates::sample_levels(&demapper, params.seed, samples);
    let profile = estimate_profile(&data, rate_method, params.kind, params.snr_db)?;
    construct_ga_from_rates(method, params, &profile.rates)
}
