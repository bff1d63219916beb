//! Bipolar `2^m`-ASK constellations, polar label maps and the AWGN channel.
//!
//! Labels are stored as integers with the first bit level `b1` in the most
//! significant of the `m` bits, so label `0b011` reads `b1 b2 b3 = 011`.

use alloc::vec::Vec;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::math;
use crate::{Error, Result};

/// Uniform `2^m`-ASK with amplitudes `±1, ±3, …, ±(2^m - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constellation {
    m: u32,
}

impl Constellation {
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=16).contains(&m) {
            return Err(Error::InvalidParameter("bits per symbol must be in 1..=16"));
        }
        Ok(Self { m })
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Amplitude of index `i`, increasing in `i`.
    #[inline]
    pub fn amplitude(&self, i: usize) -> f64 {
        (2 * i as i64 - (self.size() as i64 - 1)) as f64
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        (0..self.size()).map(|i| self.amplitude(i)).collect()
    }

    /// `E[X^2] = (4^m - 1) / 3` under the uniform input.
    pub fn energy(&self) -> f64 {
        ((1u64 << (2 * self.m)) - 1) as f64 / 3.0
    }
}

/// Noise level of the AWGN channel `Y = X + σZ`, SNR = `E[X^2] / σ^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub snr_db: f64,
    pub sigma: f64,
}

impl ChannelParams {
    pub fn from_snr_db(snr_db: f64, constellation: &Constellation) -> Self {
        Self {
            snr_db,
            sigma: snr_to_sigma(snr_db, constellation),
        }
    }

    pub fn from_sigma(sigma: f64, constellation: &Constellation) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::InvalidParameter("sigma must be positive"));
        }
        Ok(Self {
            snr_db: sigma_to_snr(sigma, constellation),
            sigma,
        })
    }
}

pub fn snr_to_sigma(snr_db: f64, constellation: &Constellation) -> f64 {
    math::sqrt(constellation.energy() / math::powi10(snr_db / 10.0))
}

pub fn sigma_to_snr(sigma: f64, constellation: &Constellation) -> f64 {
    10.0 * math::log10(constellation.energy() / (sigma * sigma))
}

/// `y_i = x_i + σ z_i` with i.i.d. standard normal `z_i`.
pub fn awgn<R: Rng + ?Sized>(x: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    x.iter()
        .map(|&xi| {
            let z: f64 = StandardNormal.sample(rng);
            xi + sigma * z
        })
        .collect()
}

/// The two polar mappers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelKind {
    /// Polar label transformed to a binary reflected Gray code (BRGC).
    Mm,
    /// Set-partitioning label, equivalently an LSB-first BRGC after transform.
    Sp,
}

/// Bijection between polar labels and amplitude indices, together with the
/// auxiliary label (BRGC or LSB-BRGC) of each amplitude and the GF(2)
/// transforms `b̃ = b·F` and `b = b̃·B` connecting them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    kind: LabelKind,
    m: u32,
    polar_by_index: Vec<u32>,
    index_by_polar: Vec<usize>,
    aux_by_index: Vec<u32>,
    forward: Vec<Vec<u8>>,
    backward: Vec<Vec<u8>>,
}

/// Bit `level` (1-based, `b1` first) of an `m`-bit label.
#[inline]
pub fn label_bit(label: u32, level: usize, m: u32) -> u8 {
    ((label >> (m as usize - level)) & 1) as u8
}

fn reverse_bits(x: u32, m: u32) -> u32 {
    x.reverse_bits() >> (32 - m)
}

/// Row vector times matrix over GF(2); `bits` are MSB-first labels.
fn gf2_apply(label: u32, matrix: &[Vec<u8>], m: u32) -> u32 {
    let mut out = 0u32;
    for col in 0..m as usize {
        let mut acc = 0u8;
        for row in 0..m as usize {
            acc ^= label_bit(label, row + 1, m) & matrix[row][col];
        }
        out = (out << 1) | acc as u32;
    }
    out
}

/// Polar label to auxiliary label: identity diagonal plus the sub-diagonal.
fn forward_matrix(m: u32) -> Vec<Vec<u8>> {
    let m = m as usize;
    (0..m)
        .map(|r| (0..m).map(|c| (r == c || r == c + 1) as u8).collect())
        .collect()
}

/// Auxiliary label to polar label: lower-triangular all-ones.
fn backward_matrix(m: u32) -> Vec<Vec<u8>> {
    let m = m as usize;
    (0..m).map(|r| (0..m).map(|c| (r >= c) as u8).collect()).collect()
}

impl LabelMap {
    /// Builds the mapper of the given kind. For `m = 3` these are the MM and SP
    /// tables of 8-ASK; larger `m` follow the same matrix pattern and are
    /// experimental.
    pub fn new(kind: LabelKind, m: u32) -> Result<Self> {
        let constellation = Constellation::new(m)?;
        let size = constellation.size();
        let forward = forward_matrix(m);
        let backward = backward_matrix(m);
        let aux_by_index: Vec<u32> = (0..size as u32)
            .map(|i| {
                let gray = i ^ (i >> 1);
                match kind {
                    LabelKind::Mm => gray,
                    LabelKind::Sp => reverse_bits(gray, m),
                }
            })
            .collect();
        let polar_by_index: Vec<u32> = aux_by_index
            .iter()
            .map(|&aux| gf2_apply(aux, &backward, m))
            .collect();
        let mut index_by_polar = alloc::vec![usize::MAX; size];
        for (i, &b) in polar_by_index.iter().enumerate() {
            index_by_polar[b as usize] = i;
        }
        if index_by_polar.contains(&usize::MAX) {
            return Err(Error::Unsupported("label map is not a bijection"));
        }
        Ok(Self {
            kind,
            m,
            polar_by_index,
            index_by_polar,
            aux_by_index,
            forward,
            backward,
        })
    }

    pub fn kind(&self) -> LabelKind {
        self.kind
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.m
    }

    pub fn constellation(&self) -> Constellation {
        Constellation { m: self.m }
    }

    /// Polar label of each amplitude index.
    pub fn polar_labels(&self) -> &[u32] {
        &self.polar_by_index
    }

    /// Auxiliary (BRGC / LSB-BRGC) label of each amplitude index.
    pub fn aux_labels(&self) -> &[u32] {
        &self.aux_by_index
    }

    pub fn index_of(&self, polar_label: u32) -> usize {
        self.index_by_polar[polar_label as usize]
    }

    /// Matrix `F` with `b̃ = b·F`.
    pub fn forward_matrix(&self) -> &[Vec<u8>] {
        &self.forward
    }

    /// Matrix `B` with `b = b̃·B`.
    pub fn backward_matrix(&self) -> &[Vec<u8>] {
        &self.backward
    }

    pub fn to_aux(&self, polar_label: u32) -> u32 {
        gf2_apply(polar_label, &self.forward, self.m)
    }

    pub fn to_polar(&self, aux_label: u32) -> u32 {
        gf2_apply(aux_label, &self.backward, self.m)
    }

    /// Amplitude transmitted for a polar label.
    pub fn map_symbol(&self, polar_label: u32) -> f64 {
        self.constellation().amplitude(self.index_of(polar_label))
    }

    /// Polar label assembled from per-level bits `b1 … bm`.
    pub fn label_from_bits(bits: &[u8]) -> u32 {
        bits.iter().fold(0u32, |acc, &b| (acc << 1) | (b & 1) as u32)
    }
}
