//! Binary polar code primitives, independent of the modulation.

mod crc;
mod llr;
mod sc;
mod scl;
mod transform;

pub use crc::{crc_check, crc_compute, CrcConfig, CRC16_CCITT};
pub use llr::{boxplus, clip_llr, hard_decision, Llr, LLR_MAX};
pub use sc::{sc_decode, sc_decode_with, sc_genie_errors, ScScratch};
pub use scl::{scl_extend, DecoderPath};
pub use transform::{polar_transform, polar_transform_in_place};

use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use crate::{Error, Result};

/// A sequence of bits, one `u8` (0 or 1) per bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BitBlock(pub Vec<u8>);

impl BitBlock {
    pub fn zeros(len: usize) -> Self {
        Self(alloc::vec![0; len])
    }

    pub fn from_bits<I: IntoIterator<Item = u8>>(bits: I) -> Self {
        Self(bits.into_iter().map(|b| b & 1).collect())
    }

    /// Parses a string of `'0'`/`'1'` characters; other characters are skipped.
    pub fn from_str_bits(s: &str) -> Self {
        Self(
            s.bytes()
                .filter_map(|c| match c {
                    b'0' => Some(0),
                    b'1' => Some(1),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

impl Deref for BitBlock {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl DerefMut for BitBlock {
    fn deref_mut(&mut self) -> &mut [u8] {
        &mut self.0
    }
}

impl From<Vec<u8>> for BitBlock {
    fn from(v: Vec<u8>) -> Self {
        Self(v)
    }
}

impl core::fmt::Display for BitBlock {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

/// Frozen positions of one length-`n` polar code; `true` means frozen.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrozenMask(Vec<bool>);

impl FrozenMask {
    pub fn new(frozen: Vec<bool>) -> Self {
        Self(frozen)
    }

    pub fn all_frozen(n: usize) -> Self {
        Self(alloc::vec![true; n])
    }

    pub fn none_frozen(n: usize) -> Self {
        Self(alloc::vec![false; n])
    }

    /// Mask of length `n` with exactly the given positions frozen.
    pub fn from_frozen_indices(n: usize, frozen: &[usize]) -> Result<Self> {
        let mut mask = alloc::vec![false; n];
        for &i in frozen {
            if i >= n {
                return Err(Error::InvalidParameter("frozen index out of range"));
            }
            mask[i] = true;
        }
        Ok(Self(mask))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.0[i]
    }

    /// Code dimension: the number of unfrozen positions.
    pub fn dimension(&self) -> usize {
        self.0.iter().filter(|&&f| !f).count()
    }

    pub fn frozen_indices(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i]).collect()
    }

    pub fn info_indices(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| !self.0[i]).collect()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }
}

pub(crate) fn check_power_of_two(n: usize) -> Result<u32> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidLength(n));
    }
    Ok(n.trailing_zeros())
}
