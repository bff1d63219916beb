use crate::math;

/// Log-likelihood ratio `ln P(bit = 0) / P(bit = 1)`, natural log.
pub type Llr = f64;

/// Saturation magnitude applied at module boundaries.
pub const LLR_MAX: Llr = 40.0;

#[inline]
pub fn clip_llr(l: Llr) -> Llr {
    l.clamp(-LLR_MAX, LLR_MAX)
}

/// Hard decision; an LLR of exactly zero decides 0.
#[inline]
pub fn hard_decision(l: Llr) -> u8 {
    (l < 0.0) as u8
}

/// `2 atanh(tanh(a/2) tanh(b/2))`, saturated to `±LLR_MAX`.
///
/// Evaluated as
/// `sign(a) sign(b) min(|a|,|b|) + ln(1+e^{-|a+b|}) - ln(1+e^{-|a-b|})`.
#[inline]
pub fn boxplus(a: Llr, b: Llr) -> Llr {
    let (aa, ab) = (a.abs(), b.abs());
    let m = if aa < ab { aa } else { ab };
    let signed = if (a < 0.0) != (b < 0.0) { -m } else { m };
    let v = signed + math::ln_1p(math::exp(-(a + b).abs())) - math::ln_1p(math::exp(-(a - b).abs()));
    clip_llr(v)
}
