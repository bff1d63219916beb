use alloc::vec::Vec;

use super::{boxplus, check_power_of_two, hard_decision, BitBlock, FrozenMask, Llr};
use crate::{Error, Result};

/// Reusable LLR workspace for the recursive decoder (`n` entries suffice).
#[derive(Debug, Clone, Default)]
pub struct ScScratch {
    llrs: Vec<Llr>,
}

impl ScScratch {
    pub fn new() -> Self {
        Self::default()
    }

    fn take(&mut self, n: usize) -> &mut [Llr] {
        if self.llrs.len() < n {
            self.llrs.resize(n, 0.0);
        }
        &mut self.llrs[..n]
    }
}

/// Variable-node update for the second half of a butterfly.
#[inline]
pub(crate) fn g_update(a: Llr, b: Llr, left_bit: u8) -> Llr {
    if left_bit == 0 {
        b + a
    } else {
        b - a
    }
}

/// Successive cancellation decoding.
///
/// Frozen positions take `frozen_values` (all-zero when `None`); information
/// positions take the hard decision of their LLR, ties deciding 0. Returns the
/// estimate `û` and its re-encoding `ĉ`.
pub fn sc_decode(
    channel_llrs: &[Llr],
    mask: &FrozenMask,
    frozen_values: Option<&BitBlock>,
) -> Result<(BitBlock, BitBlock)> {
    let n = channel_llrs.len();
    if mask.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: mask.len(),
        });
    }
    if let Some(fv) = frozen_values {
        if fv.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: fv.len(),
            });
        }
    }
    let mut u = BitBlock::zeros(n);
    let mut c = BitBlock::zeros(n);
    let frozen = mask.as_slice();
    sc_decode_with(channel_llrs, &mut u, &mut c, &mut ScScratch::new(), |i, l| {
        if frozen[i] {
            frozen_values.map_or(0, |fv| fv[i])
        } else {
            hard_decision(l)
        }
    })?;
    Ok((u, c))
}

/// SC recursion with a caller-supplied decision rule.
///
/// `decide(i, llr)` receives the synthesized-channel LLR of bit `i` (in
/// decoding order) and returns the bit to feed back. `u` receives those bits
/// and `c` their re-encoding.
pub fn sc_decode_with<F>(
    channel_llrs: &[Llr],
    u: &mut [u8],
    c: &mut [u8],
    scratch: &mut ScScratch,
    mut decide: F,
) -> Result<()>
where
    F: FnMut(usize, Llr) -> u8,
{
    let n = channel_llrs.len();
    check_power_of_two(n)?;
    for len in [u.len(), c.len()] {
        if len != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: len,
            });
        }
    }
    if n == 1 {
        let b = decide(0, channel_llrs[0]);
        u[0] = b;
        c[0] = b;
        return Ok(());
    }
    let work = scratch.take(n);
    recurse(channel_llrs, 0, u, c, work, &mut decide);
    Ok(())
}

fn recurse<F>(llr: &[Llr], offset: usize, u: &mut [u8], c: &mut [u8], work: &mut [Llr], decide: &mut F)
where
    F: FnMut(usize, Llr) -> u8,
{
    let n = llr.len();
    if n == 1 {
        let b = decide(offset, llr[0]);
        u[0] = b;
        c[0] = b;
        return;
    }
    let h = n / 2;
    let (buf, rest) = work.split_at_mut(h);
    let (left, right) = llr.split_at(h);
    let (u_lo, u_hi) = u.split_at_mut(h);
    let (c_lo, c_hi) = c.split_at_mut(h);

    for i in 0..h {
        buf[i] = boxplus(left[i], right[i]);
    }
    recurse(buf, offset, u_lo, c_lo, rest, decide);
    for i in 0..h {
        buf[i] = g_update(left[i], right[i], c_lo[i]);
    }
    recurse(buf, offset + h, u_hi, c_hi, rest, decide);
    for i in 0..h {
        c_lo[i] ^= c_hi[i];
    }
}

/// Genie-aided SC pass: every bit is fed back with its true value `u_true`,
/// and `errors[i]` is incremented when the hard decision of bit `i` would have
/// been wrong. The per-bit decisions ignore the frozen set, so the counts
/// describe the synthesized bit channels themselves.
pub fn sc_genie_errors(
    channel_llrs: &[Llr],
    u_true: &[u8],
    errors: &mut [u64],
    scratch: &mut ScScratch,
) -> Result<()> {
    let n = channel_llrs.len();
    if u_true.len() != n || errors.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: u_true.len().min(errors.len()),
        });
    }
    let mut u = alloc::vec![0u8; n];
    let mut c = alloc::vec![0u8; n];
    sc_decode_with(channel_llrs, &mut u, &mut c, scratch, |i, l| {
        if hard_decision(l) != u_true[i] {
            errors[i] += 1;
        }
        u_true[i]
    })
}
