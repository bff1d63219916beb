//! Successive polar demappers for 8-ASK.
//!
//! Level `j` receives the channel output and the decided bits `b̂1 … b̂(j-1)` of
//! the earlier levels and returns an LLR for polar label bit `bj`.
//!
//! * [`DemapperKind::Sp`] computes the exact conditional LLR of the SP label
//!   and is matched.
//! * [`DemapperKind::Mm`] and [`DemapperKind::MmSp`] compute the unconditional
//!   LLRs `L̃j` of the auxiliary BRGC (resp. LSB-BRGC) label and combine them
//!   through the label transform `b̃1 = b1⊕b2, b̃2 = b2⊕b3, b̃3 = b3` as if they
//!   were independent:
//!
//!   ```text
//!   L1 = L̃1 ⊞ (L̃2 ⊞ L̃3)
//!   L2 = (1-2b̂1) L̃1 + (L̃2 ⊞ L̃3)
//!   L3 = (1-2b̂2) L̃2 + L̃3
//!   ```
//!
//!   The `L̃j` share one channel output, so these demappers are mismatched.

use alloc::vec::Vec;

use crate::math;
use crate::modulation::{label_bit, Constellation, LabelKind, LabelMap};
use crate::polar::{boxplus, clip_llr, Llr};
use crate::{Error, Result};

/// Largest supported bits per symbol for the exact demapper.
pub const MAX_BITS_PER_SYMBOL: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DemapperKind {
    Sp,
    Mm,
    MmSp,
}

impl DemapperKind {
    pub const ALL: [DemapperKind; 3] = [DemapperKind::Mm, DemapperKind::MmSp, DemapperKind::Sp];

    /// The polar mapper this demapper pairs with.
    pub fn label_kind(self) -> LabelKind {
        match self {
            DemapperKind::Mm => LabelKind::Mm,
            DemapperKind::Sp | DemapperKind::MmSp => LabelKind::Sp,
        }
    }

    pub fn is_matched(self) -> bool {
        self == DemapperKind::Sp
    }

    pub fn name(self) -> &'static str {
        match self {
            DemapperKind::Sp => "sp",
            DemapperKind::Mm => "mm",
            DemapperKind::MmSp => "mmsp",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Some(DemapperKind::Sp),
            "mm" => Some(DemapperKind::Mm),
            "mmsp" | "mm-sp" | "mm_sp" => Some(DemapperKind::MmSp),
            _ => None,
        }
    }
}

/// Work done by a demapper call: terms entering log-sum-exp likelihood sums
/// and boxplus evaluations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub exp_terms: u64,
    pub boxplus: u64,
}

/// Inputs of one demapper evaluation.
#[derive(Debug, Clone, Copy)]
pub struct DemapContext<'a> {
    pub y: f64,
    pub sigma: f64,
    pub map: &'a LabelMap,
    /// Decided bits of the earlier levels, `b1` first.
    pub prefix: &'a [u8],
}

/// Exact LLR of bit `level` (1-based) of `labels` given `y` and the bits of
/// the earlier levels, for uniform symbols on `2^m`-ASK. `labels[i]` is the
/// label of amplitude index `i`.
pub fn exact_bit_llr(y: f64, sigma: f64, labels: &[u32], level: usize, prefix: &[u8]) -> Result<Llr> {
    let size = labels.len();
    if size < 2 || !size.is_power_of_two() {
        return Err(Error::InvalidLength(size));
    }
    let m = size.trailing_zeros();
    if level == 0 || level > m as usize || prefix.len() != level - 1 {
        return Err(Error::InvalidParameter("prefix length must equal level - 1"));
    }
    let c = Constellation::new(m)?;
    let scale = -0.5 / (sigma * sigma);
    let mut num = f64::NEG_INFINITY;
    let mut den = f64::NEG_INFINITY;
    let mut any = [false; 2];
    for (i, &lab) in labels.iter().enumerate() {
        if (1..level).any(|l| label_bit(lab, l, m) != prefix[l - 1]) {
            continue;
        }
        let d = y - c.amplitude(i);
        let t = scale * d * d;
        if label_bit(lab, level, m) == 0 {
            num = math::log_add_exp(num, t);
            any[0] = true;
        } else {
            den = math::log_add_exp(den, t);
            any[1] = true;
        }
    }
    if !(any[0] && any[1]) {
        return Err(Error::Unsupported("empty consistent symbol set"));
    }
    Ok(clip_llr(num - den))
}

/// Index lists of the symbols consistent with one prefix, split by the value
/// of the current bit.
#[derive(Debug, Clone)]
struct Split {
    zeros: Vec<usize>,
    ones: Vec<usize>,
}

/// A polar demapper bound to a label map and a noise level.
#[derive(Debug, Clone)]
pub struct Demapper {
    kind: DemapperKind,
    map: LabelMap,
    sigma: f64,
    amplitudes: Vec<f64>,
    /// `polar_splits[j][p]`: level `j + 1`, prefix value `p`.
    polar_splits: Vec<Vec<Split>>,
    /// Unconditional splits of the auxiliary label, per level.
    aux_splits: Vec<Split>,
}

/// `prefix: None` keeps every symbol.
fn splits_for(labels: &[u32], m: u32, level: usize, prefix: Option<u32>) -> Split {
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for (i, &lab) in labels.iter().enumerate() {
        if prefix.is_some_and(|p| (lab >> (m as usize - level + 1)) != p) {
            continue;
        }
        if label_bit(lab, level, m) == 0 {
            zeros.push(i);
        } else {
            ones.push(i);
        }
    }
    Split { zeros, ones }
}

impl Demapper {
    /// 8-ASK demapper with the label map matching `kind`.
    pub fn new(kind: DemapperKind, sigma: f64) -> Result<Self> {
        Self::with_map(kind, LabelMap::new(kind.label_kind(), 3)?, sigma)
    }

    /// Demapper over an explicit label map. The mismatched kinds are defined
    /// for `m = 3` only.
    pub fn with_map(kind: DemapperKind, map: LabelMap, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParameter("sigma must be positive and finite"));
        }
        let m = map.bits_per_symbol();
        if m > MAX_BITS_PER_SYMBOL {
            return Err(Error::Unsupported("too many bits per symbol"));
        }
        if !kind.is_matched() && m != 3 {
            return Err(Error::Unsupported("mismatched demappers are defined for 8-ASK only"));
        }
        if map.kind() != kind.label_kind() {
            return Err(Error::Unsupported("label map does not match demapper kind"));
        }
        let polar_splits = (1..=m as usize)
            .map(|level| {
                (0..1u32 << (level - 1))
                    .map(|p| splits_for(map.polar_labels(), m, level, Some(p)))
                    .collect()
            })
            .collect();
        let aux_splits = (1..=m as usize)
            .map(|level| splits_for(map.aux_labels(), m, level, None))
            .collect();
        Ok(Self {
            kind,
            amplitudes: map.constellation().amplitudes(),
            map,
            sigma,
            polar_splits,
            aux_splits,
        })
    }

    pub fn kind(&self) -> DemapperKind {
        self.kind
    }

    pub fn map(&self) -> &LabelMap {
        &self.map
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn levels(&self) -> usize {
        self.map.bits_per_symbol() as usize
    }

    #[inline]
    fn log_metrics(&self, y: f64, out: &mut [f64]) {
        let scale = -0.5 / (self.sigma * self.sigma);
        for (o, &x) in out.iter_mut().zip(&self.amplitudes) {
            let d = y - x;
            *o = scale * d * d;
        }
    }

    #[inline]
    fn split_llr(metrics: &[f64], split: &Split, counter: &mut OpCounter) -> Llr {
        counter.exp_terms += (split.zeros.len() + split.ones.len()) as u64;
        let lse = |idx: &[usize]| {
            let max = idx.iter().map(|&i| metrics[i]).fold(f64::NEG_INFINITY, f64::max);
            let s: f64 = idx.iter().map(|&i| math::exp(metrics[i] - max)).sum();
            max + math::ln(s)
        };
        clip_llr(lse(&split.zeros) - lse(&split.ones))
    }

    /// Exact LLRs `L̃j` of the auxiliary label bits, written to `out`.
    pub fn aux_llrs(&self, y: f64, out: &mut [Llr]) {
        self.aux_llrs_counted(y, out, &mut OpCounter::default());
    }

    fn aux_llrs_counted(&self, y: f64, out: &mut [Llr], counter: &mut OpCounter) {
        let mut metrics = [0.0; 1 << MAX_BITS_PER_SYMBOL];
        let metrics = &mut metrics[..self.amplitudes.len()];
        self.log_metrics(y, metrics);
        for (o, split) in out.iter_mut().zip(&self.aux_splits) {
            *o = Self::split_llr(metrics, split, counter);
        }
    }

    /// LLR of polar label bit `level` (1-based) given `prefix = b̂1 … b̂(level-1)`.
    pub fn demap_level(&self, y: f64, level: usize, prefix: &[u8]) -> Result<Llr> {
        self.demap_level_counted(y, level, prefix, &mut OpCounter::default())
    }

    pub fn demap_level_counted(
        &self,
        y: f64,
        level: usize,
        prefix: &[u8],
        counter: &mut OpCounter,
    ) -> Result<Llr> {
        if level == 0 || level > self.levels() || prefix.len() != level - 1 {
            return Err(Error::InvalidParameter("prefix length must equal level - 1"));
        }
        let p = LabelMap::label_from_bits(prefix);
        match self.kind {
            DemapperKind::Sp => {
                let mut metrics = [0.0; 1 << MAX_BITS_PER_SYMBOL];
                let metrics = &mut metrics[..self.amplitudes.len()];
                self.log_metrics(y, metrics);
                Ok(Self::split_llr(metrics, &self.polar_splits[level - 1][p as usize], counter))
            }
            DemapperKind::Mm | DemapperKind::MmSp => {
                let mut aux = [0.0; 3];
                self.aux_llrs_counted(y, &mut aux, counter);
                Ok(combine_mismatched(&aux, level, prefix, counter))
            }
        }
    }

    /// LLRs of every level with the true label bits as prefixes (genie
    /// conditioning), written to `out`.
    pub fn demap_genie(&self, y: f64, polar_label: u32, out: &mut [Llr]) {
        let m = self.levels();
        match self.kind {
            DemapperKind::Sp => {
                let mut metrics = [0.0; 1 << MAX_BITS_PER_SYMBOL];
                let metrics = &mut metrics[..self.amplitudes.len()];
                self.log_metrics(y, metrics);
                let mut counter = OpCounter::default();
                for level in 1..=m {
                    let p = polar_label >> (m - level + 1);
                    out[level - 1] = Self::split_llr(metrics, &self.polar_splits[level - 1][p as usize], &mut counter);
                }
            }
            DemapperKind::Mm | DemapperKind::MmSp => {
                let mut aux = [0.0; 3];
                self.aux_llrs(y, &mut aux);
                let bits = [label_bit(polar_label, 1, 3), label_bit(polar_label, 2, 3)];
                let mut counter = OpCounter::default();
                for level in 1..=3 {
                    out[level - 1] = combine_mismatched(&aux, level, &bits[..level - 1], &mut counter);
                }
            }
        }
    }

    /// LLRs of level `level` for every possible prefix value:
    /// `out[p]` is the LLR under prefix `p` (integer form, `b1` most
    /// significant). `out` must hold `2^(level-1)` entries.
    pub fn demap_all_prefixes(&self, y: f64, level: usize, out: &mut [Llr]) {
        match self.kind {
            DemapperKind::Sp => {
                let mut metrics = [0.0; 1 << MAX_BITS_PER_SYMBOL];
                let metrics = &mut metrics[..self.amplitudes.len()];
                self.log_metrics(y, metrics);
                let mut counter = OpCounter::default();
                for (o, split) in out.iter_mut().zip(&self.polar_splits[level - 1]) {
                    *o = Self::split_llr(metrics, split, &mut counter);
                }
            }
            DemapperKind::Mm | DemapperKind::MmSp => {
                let mut aux = [0.0; 3];
                self.aux_llrs(y, &mut aux);
                self.combine_all_prefixes(&aux, level, out);
            }
        }
    }

    /// Mismatched combination for every prefix value from precomputed `L̃`.
    pub fn combine_all_prefixes(&self, aux: &[Llr], level: usize, out: &mut [Llr]) {
        let mut counter = OpCounter::default();
        for (p, o) in out.iter_mut().enumerate() {
            let prefix = [((p >> 1) & 1) as u8, (p & 1) as u8];
            let prefix = match level {
                1 => &prefix[..0],
                2 => &prefix[1..],
                _ => &prefix[..],
            };
            *o = combine_mismatched(aux, level, prefix, &mut counter);
        }
    }
}

/// Boxplus network of the MM and MM-SP demappers.
pub fn combine_mismatched(aux: &[Llr], level: usize, prefix: &[u8], counter: &mut OpCounter) -> Llr {
    let sign = |b: u8| if b == 0 { 1.0 } else { -1.0 };
    let l = match level {
        1 => {
            counter.boxplus += 2;
            boxplus(aux[0], boxplus(aux[1], aux[2]))
        }
        2 => {
            counter.boxplus += 1;
            sign(prefix[0]) * aux[0] + boxplus(aux[1], aux[2])
        }
        3 => sign(prefix[1]) * aux[1] + aux[2],
        _ => unreachable!("8-ASK has three levels"),
    };
    clip_llr(l)
}

/// Free-function form of [`Demapper::demap_level`].
pub fn demap_level(kind: DemapperKind, ctx: &DemapContext<'_>, level: usize) -> Result<Llr> {
    Demapper::with_map(kind, ctx.map.clone(), ctx.sigma)?.demap_level(ctx.y, level, ctx.prefix)
}
