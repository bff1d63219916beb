use alloc::vec::Vec;

use super::BitBlock;

/// Bitwise shift-register CRC parameters, MSB-first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrcConfig {
    pub width: u32,
    pub poly: u32,
    pub init: u32,
}

/// 16-bit CRC with generator `x^16 + x^12 + x^5 + 1` and a zero register.
pub const CRC16_CCITT: CrcConfig = CrcConfig {
    width: 16,
    poly: 0x1021,
    init: 0x0000,
};

impl Default for CrcConfig {
    fn default() -> Self {
        CRC16_CCITT
    }
}

impl CrcConfig {
    fn mask(&self) -> u32 {
        if self.width >= 32 {
            u32::MAX
        } else {
            (1u32 << self.width) - 1
        }
    }

    fn register(&self, data: &[u8]) -> u32 {
        let top = 1u32 << (self.width - 1);
        let mask = self.mask();
        let mut reg = self.init & mask;
        for &b in data {
            let feedback = ((reg & top) != 0) ^ (b & 1 == 1);
            reg = (reg << 1) & mask;
            if feedback {
                reg ^= self.poly & mask;
            }
        }
        reg
    }
}

/// CRC of `data`, `width` bits, most significant first.
pub fn crc_compute(data: &[u8], cfg: &CrcConfig) -> BitBlock {
    let reg = cfg.register(data);
    BitBlock(
        (0..cfg.width)
            .rev()
            .map(|i| ((reg >> i) & 1) as u8)
            .collect::<Vec<u8>>(),
    )
}

/// True iff the trailing `width` bits equal the CRC of the bits before them.
pub fn crc_check(data_with_crc: &[u8], cfg: &CrcConfig) -> bool {
    let w = cfg.width as usize;
    if data_with_crc.len() < w {
        return false;
    }
    let (data, crc) = data_with_crc.split_at(data_with_crc.len() - w);
    crc_compute(data, cfg).0 == crc
}
