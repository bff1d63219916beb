use super::{check_power_of_two, BitBlock};
use crate::Result;

/// Computes `c = u F^{⊗log2 n}` over GF(2) with `F = [[1,0],[1,1]]`, in
/// natural index order (no bit-reversal permutation).
pub fn polar_transform(u: &BitBlock) -> Result<BitBlock> {
    let mut c = u.clone();
    polar_transform_in_place(&mut c)?;
    Ok(c)
}

/// In-place butterfly. The transform is an involution.
pub fn polar_transform_in_place(bits: &mut [u8]) -> Result<()> {
    let n = bits.len();
    check_power_of_two(n)?;
    // For u = (a, b): c = (aG ^ bG, bG).
    let mut half = 1;
    while half < n {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter_mut().zip(hi.iter()) {
                *l ^= *h;
            }
        }
        half *= 2;
    }
    Ok(())
}
