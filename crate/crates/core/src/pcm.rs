//! Multilevel polar-coded modulation of one frame.
//!
//! The length `m·n` bit vector `u` is split into `m` level blocks of `n` bits,
//! each block is polar transformed, and symbol `i` carries the polar label
//! `c_1[i] … c_m[i]`. Decoding alternates demapping and decoding level by
//! level, feeding decided codeword bits of earlier levels into the demapper.

use alloc::vec::Vec;

use crate::construction::CodeSpec;
use crate::demapper::{Demapper, DemapperKind};
use crate::modulation::LabelMap;
use crate::polar::{
    crc_check, crc_compute, polar_transform_in_place, sc_decode_with, scl_extend, DecoderPath, Llr, ScScratch,
};
use crate::{Error, Result};

/// A [`CodeSpec`] prepared for encoding and decoding.
#[derive(Debug, Clone)]
pub struct PcmCode {
    spec: CodeSpec,
    map: LabelMap,
    info_positions: Vec<usize>,
}

/// Encoder output.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedFrame {
    /// `u` of every level, concatenated.
    pub u: Vec<u8>,
    /// Codeword of every level.
    pub codewords: Vec<Vec<u8>>,
    pub amplitudes: Vec<f64>,
}

impl PcmCode {
    pub fn new(spec: CodeSpec) -> Result<Self> {
        spec.validate()?;
        let map = LabelMap::new(spec.label_kind, spec.m as u32)?;
        let info_positions = spec.info_positions();
        Ok(Self {
            spec,
            map,
            info_positions,
        })
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn map(&self) -> &LabelMap {
        &self.map
    }

    /// Bits accepted by [`PcmCode::encode`].
    pub fn payload_len(&self) -> usize {
        self.spec.payload_len()
    }

    /// Places `info_bits` (plus their CRC when configured) on the unfrozen
    /// positions in level-major order and maps the codewords to amplitudes.
    pub fn encode(&self, info_bits: &[u8]) -> Result<EncodedFrame> {
        if info_bits.len() != self.payload_len() {
            return Err(Error::LengthMismatch {
                expected: self.payload_len(),
                actual: info_bits.len(),
            });
        }
        let (m, n) = (self.spec.m, self.spec.n);
        let mut u = alloc::vec![0u8; m * n];
        let crc = self.spec.crc.map(|cfg| crc_compute(info_bits, &cfg));
        let all = info_bits.iter().chain(crc.iter().flat_map(|c| c.iter()));
        for (&pos, &b) in self.info_positions.iter().zip(all) {
            u[pos] = b & 1;
        }
        let codewords: Vec<Vec<u8>> = u
            .chunks_exact(n)
            .map(|block| {
                let mut c = block.to_vec();
                polar_transform_in_place(&mut c).expect("validated length");
                c
            })
            .collect();
        let amplitudes = (0..n)
            .map(|i| {
                let label = codewords.iter().fold(0u32, |acc, c| (acc << 1) | c[i] as u32);
                self.map.map_symbol(label)
            })
            .collect();
        Ok(EncodedFrame { u, codewords, amplitudes })
    }

    /// Payload bits read back from a full `u` estimate (CRC bits dropped).
    pub fn extract_payload(&self, u: &[u8]) -> Vec<u8> {
        self.info_positions[..self.payload_len()].iter().map(|&p| u[p]).collect()
    }

    fn info_with_crc(&self, u: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&p| u[p]).collect()
    }

    fn check_inputs(&self, y: &[f64], demapper: &Demapper) -> Result<()> {
        if y.len() != self.spec.n {
            return Err(Error::LengthMismatch {
                expected: self.spec.n,
                actual: y.len(),
            });
        }
        if demapper.map().kind() != self.spec.label_kind || demapper.levels() != self.spec.m {
            return Err(Error::Unsupported("demapper does not match the code's label map"));
        }
        Ok(())
    }

    /// SC decoding with decision feedback between levels. Returns the
    /// payload estimate and the full `u` estimate.
    pub fn decode_sc(&self, y: &[f64], demapper: &Demapper) -> Result<(Vec<u8>, Vec<u8>)> {
        self.decode_sc_inner(y, demapper, None)
    }

    /// SC decoding where the demapper sees the true codeword bits of the
    /// earlier levels.
    pub fn decode_sc_genie(&self, y: &[f64], demapper: &Demapper, codewords: &[Vec<u8>]) -> Result<(Vec<u8>, Vec<u8>)> {
        self.decode_sc_inner(y, demapper, Some(codewords))
    }

    fn decode_sc_inner(
        &self,
        y: &[f64],
        demapper: &Demapper,
        genie: Option<&[Vec<u8>]>,
    ) -> Result<(Vec<u8>, Vec<u8>)> {
        self.check_inputs(y, demapper)?;
        let (m, n) = (self.spec.m, self.spec.n);
        let tables = LevelTables::new(demapper, y);
        let mut u = alloc::vec![0u8; m * n];
        let mut c_hat: Vec<Vec<u8>> = Vec::with_capacity(m);
        let mut scratch = ScScratch::new();
        let mut llrs = alloc::vec![0.0; n];
        for j in 0..m {
            let prev: &[Vec<u8>] = genie.unwrap_or(&c_hat[..]);
            for (i, l) in llrs.iter_mut().enumerate() {
                let prefix = prev[..j].iter().fold(0usize, |acc, c| (acc << 1) | c[i] as usize);
                *l = tables.llr(j, i, prefix);
            }
            let mut c = alloc::vec![0u8; n];
            let frozen = self.spec.masks[j].as_slice();
            sc_decode_with(&llrs, &mut u[j * n..(j + 1) * n], &mut c, &mut scratch, |i, l| {
                if frozen[i] {
                    0
                } else {
                    crate::polar::hard_decision(l)
                }
            })?;
            c_hat.push(c);
        }
        Ok((self.extract_payload(&u), u))
    }

    /// SC list decoding with one list carried across all levels. With a CRC
    /// the best path passing the check wins, otherwise the best path.
    pub fn decode_scl(&self, y: &[f64], demapper: &Demapper, list_size: usize) -> Result<(Vec<u8>, Vec<u8>)> {
        self.decode_scl_paths(y, demapper, list_size).map(|(p, u, _)| (p, u))
    }

    /// [`PcmCode::decode_scl`] that also returns the surviving paths.
    pub fn decode_scl_paths(
        &self,
        y: &[f64],
        demapper: &Demapper,
        list_size: usize,
    ) -> Result<(Vec<u8>, Vec<u8>, Vec<DecoderPath>)> {
        if list_size < 1 {
            return Err(Error::InvalidListSize);
        }
        self.check_inputs(y, demapper)?;
        let (m, n) = (self.spec.m, self.spec.n);
        let tables = LevelTables::new(demapper, y);
        let mut paths = alloc::vec![DecoderPath::root()];
        for j in 0..m {
            let llrs: Vec<Vec<Llr>> = paths
                .iter()
                .map(|p| {
                    (0..n)
                        .map(|i| {
                            let prefix = p.codewords[..j].iter().fold(0usize, |acc, c| (acc << 1) | c[i] as usize);
                            tables.llr(j, i, prefix)
                        })
                        .collect()
                })
                .collect();
            paths = scl_extend(paths, &llrs, &self.spec.masks[j], list_size)?;
        }
        let chosen = match self.spec.crc {
            Some(cfg) => paths
                .iter()
                .position(|p| crc_check(&self.info_with_crc(&p.bits), &cfg))
                .unwrap_or(0),
            None => 0,
        };
        let u = paths[chosen].bits.clone();
        Ok((self.extract_payload(&u), u, paths))
    }
}

/// Demapper outputs of one frame for every level and every possible prefix
/// of earlier decided bits.
struct LevelTables {
    /// `tables[j][i * 2^j + prefix]`.
    tables: Vec<Vec<Llr>>,
}

impl LevelTables {
    fn new(demapper: &Demapper, y: &[f64]) -> Self {
        let m = demapper.levels();
        let mut tables: Vec<Vec<Llr>> = (0..m).map(|j| alloc::vec![0.0; y.len() << j]).collect();
        match demapper.kind() {
            DemapperKind::Sp => {
                for (j, t) in tables.iter_mut().enumerate() {
                    let w = 1 << j;
                    for (i, &yi) in y.iter().enumerate() {
                        demapper.demap_all_prefixes(yi, j + 1, &mut t[i * w..(i + 1) * w]);
                    }
                }
            }
            DemapperKind::Mm | DemapperKind::MmSp => {
                let mut aux = [0.0; 3];
                for (i, &yi) in y.iter().enumerate() {
                    demapper.aux_llrs(yi, &mut aux);
                    for (j, t) in tables.iter_mut().enumerate() {
                        let w = 1 << j;
                        demapper.combine_all_prefixes(&aux, j + 1, &mut t[i * w..(i + 1) * w]);
                    }
                }
            }
        }
        Self { tables }
    }

    #[inline]
    fn llr(&self, level: usize, symbol: usize, prefix: usize) -> Llr {
        self.tables[level][(symbol << level) + prefix]
    }
}
