use alloc::vec::Vec;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::SamplePair;
use crate::demapper::Demapper;
use crate::modulation::label_bit;
use crate::rng::stream_rng;

/// Samples per independently seeded shard.
pub const SHARD_LEN: usize = 1 << 16;

/// Genie-conditioned demapper outputs, one vector per bit level.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LevelSamples {
    /// `(Bj, Lj)` after polar demapping with the true earlier bits.
    pub polar: Vec<Vec<SamplePair>>,
    /// `(B̃j, L̃j)` of the auxiliary label before polar demapping.
    pub aux: Vec<Vec<SamplePair>>,
}

impl LevelSamples {
    pub fn with_levels(m: usize, capacity: usize) -> Self {
        Self {
            polar: (0..m).map(|_| Vec::with_capacity(capacity)).collect(),
            aux: (0..m).map(|_| Vec::with_capacity(capacity)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.polar.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn append(&mut self, mut other: LevelSamples) {
        if self.polar.is_empty() {
            *self = other;
            return;
        }
        for (a, b) in self.polar.iter_mut().zip(other.polar.iter_mut()) {
            a.append(b);
        }
        for (a, b) in self.aux.iter_mut().zip(other.aux.iter_mut()) {
            a.append(b);
        }
    }
}

/// Draws `len` uniform symbols through the AWGN channel and records every
/// level's demapper output. Shard `shard` of `seed` is reproducible on its
/// own.
pub fn sample_shard(demapper: &Demapper, seed: u64, shard: u64, len: usize) -> LevelSamples {
    let m = demapper.levels();
    let map = demapper.map();
    let sigma = demapper.sigma();
    let mut rng = stream_rng(seed, shard);
    let mut out = LevelSamples::with_levels(m, len);
    let mut polar = [0.0; 8];
    let mut aux = [0.0; 8];
    let has_aux = m <= 8;
    for _ in 0..len {
        let label: u32 = rng.random_range(0..(1u32 << m));
        let idx = map.index_of(label);
        let z: f64 = StandardNormal.sample(&mut rng);
        let y = map.constellation().amplitude(idx) + sigma * z;
        demapper.demap_genie(y, label, &mut polar[..m]);
        if has_aux {
            demapper.aux_llrs(y, &mut aux[..m]);
        }
        let aux_label = map.aux_labels()[idx];
        for j in 0..m {
            out.polar[j].push(SamplePair {
                bit: label_bit(label, j + 1, m as u32),
                llr: polar[j],
            });
            out.aux[j].push(SamplePair {
                bit: label_bit(aux_label, j + 1, m as u32),
                llr: aux[j],
            });
        }
    }
    out
}

/// `count` samples assembled from consecutive shards.
pub fn sample_levels(demapper: &Demapper, seed: u64, count: usize) -> LevelSamples {
    let mut out = LevelSamples::with_levels(demapper.levels(), count);
    let mut shard = 0u64;
    let mut remaining = count;
    while remaining > 0 {
        let len = remaining.min(SHARD_LEN);
        out.append(sample_shard(demapper, seed, shard, len));
        remaining -= len;
        shard += 1;
    }
    out
}
