//! Gaussian-approximation density evolution through the polar butterfly.

use alloc::vec::Vec;

use crate::polar::check_power_of_two;
use crate::rates::{j_fun, j_inv_saturating, Mi};
use crate::Result;

/// MI of the check-node (`I⁻`) output of two channels.
pub fn ga_check(a: Mi, b: Mi) -> Mi {
    let sa = j_inv_saturating(a.flip());
    let sb = j_inv_saturating(b.flip());
    j_fun(hypot(sa, sb)).flip()
}

/// MI of the variable-node (`I⁺`) output of two channels.
pub fn ga_variable(a: Mi, b: Mi) -> Mi {
    let sa = j_inv_saturating(a);
    let sb = j_inv_saturating(b);
    j_fun(hypot(sa, sb))
}

fn hypot(a: f64, b: f64) -> f64 {
    if a.is_infinite() || b.is_infinite() {
        return f64::INFINITY;
    }
    crate::math::sqrt(a * a + b * b)
}

/// MI of every synthesized bit channel of a length-`n` polar code whose
/// channels all carry `channel_mi`, in natural `u` index order (the check-node
/// branch takes the lower half of the indices).
pub fn ga_evolve(channel_mi: impl Into<Mi>, n: usize) -> Result<Vec<Mi>> {
    check_power_of_two(n)?;
    let mut out = Vec::with_capacity(n);
    evolve_into(channel_mi.into(), n, &mut out);
    Ok(out)
}

fn evolve_into(mi: Mi, n: usize, out: &mut Vec<Mi>) {
    if n == 1 {
        out.push(mi);
        return;
    }
    evolve_into(ga_check(mi, mi), n / 2, out);
    evolve_into(ga_variable(mi, mi), n / 2, out);
}
