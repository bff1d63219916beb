//! Successive cancellation list decoding of one polar block.
//!
//! Each path keeps its own stack of LLR layers and partial-sum layers behind
//! reference-counted buffers, so cloning a path is cheap and a layer is only
//! copied when one of the sharing paths writes to it. Decided bits live in a
//! shared append-only history arena and are traced back once per block.

use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::sc::g_update;
use super::{boxplus, check_power_of_two, hard_decision, polar_transform_in_place, FrozenMask, Llr};
use crate::math::softplus;
use crate::{Error, Result};

/// One surviving decoding hypothesis carried across polar blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderPath {
    /// Decided `u` bits of every block decoded so far, concatenated.
    pub bits: Vec<u8>,
    /// Re-encoded codeword of every block decoded so far.
    pub codewords: Vec<Vec<u8>>,
    /// Accumulated penalty; nondecreasing as bits are decided.
    pub metric: f64,
}

impl DecoderPath {
    /// The empty path every list decoder starts from.
    pub fn root() -> Self {
        Self {
            bits: Vec::new(),
            codewords: Vec::new(),
            metric: 0.0,
        }
    }
}

impl Default for DecoderPath {
    fn default() -> Self {
        Self::root()
    }
}

const NO_PARENT: u32 = u32::MAX;

#[derive(Clone)]
struct Work {
    llr: Vec<Rc<Vec<Llr>>>,
    partial: Vec<Rc<Vec<u8>>>,
    origin: usize,
    tail: u32,
    metric: f64,
    rank: u32,
}

#[derive(Clone, Copy)]
struct Candidate {
    metric: f64,
    rank: u32,
    /// Penalty of this step alone. Siblings whose metrics round to the same
    /// value are still ordered by it, so a list of one follows SC exactly.
    penalty: f64,
    bit: u8,
    parent: usize,
}

fn candidate_order(a: &Candidate, b: &Candidate) -> Ordering {
    a.metric
        .total_cmp(&b.metric)
        .then(a.rank.cmp(&b.rank))
        .then(a.penalty.total_cmp(&b.penalty))
        .then(a.bit.cmp(&b.bit))
}

/// Extends every path through one length-`n` polar block and prunes to the
/// `list_size` best.
///
/// `per_path_llrs[i]` holds the channel LLRs path `i` sees for this block.
/// Frozen positions are decoded as 0. At each decision the continuation that
/// agrees with the LLR sign costs `ln(1 + e^{-|L|})`, the other one `|L|` more.
/// Metric ties are broken by the lexicographically smaller decided-bit
/// sequence. The output is sorted best first.
pub fn scl_extend(
    paths: Vec<DecoderPath>,
    per_path_llrs: &[Vec<Llr>],
    mask: &FrozenMask,
    list_size: usize,
) -> Result<Vec<DecoderPath>> {
    if list_size < 1 {
        return Err(Error::InvalidListSize);
    }
    if paths.is_empty() || paths.len() > list_size {
        return Err(Error::InvalidParameter("number of paths must be in 1..=list_size"));
    }
    if per_path_llrs.len() != paths.len() {
        return Err(Error::LengthMismatch {
            expected: paths.len(),
            actual: per_path_llrs.len(),
        });
    }
    let n = mask.len();
    let depth = check_power_of_two(n)? as usize;
    for l in per_path_llrs {
        if l.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: l.len(),
            });
        }
    }

    // Lexicographic rank of the incoming prefixes.
    let mut order: Vec<usize> = (0..paths.len()).collect();
    order.sort_by(|&a, &b| paths[a].bits.cmp(&paths[b].bits));
    let mut ranks = alloc::vec![0u32; paths.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = r as u32;
    }

    let mut work: Vec<Work> = per_path_llrs
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let mut llr = Vec::with_capacity(depth + 1);
            llr.push(Rc::new(l.clone()));
            for layer in 1..=depth {
                llr.push(Rc::new(alloc::vec![0.0; n >> layer]));
            }
            let partial = (0..depth).map(|layer| Rc::new(alloc::vec![0u8; n >> layer])).collect();
            Work {
                llr,
                partial,
                origin: i,
                tail: NO_PARENT,
                metric: paths[i].metric,
                rank: ranks[i],
            }
        })
        .collect();

    let mut history: Vec<(u32, u8)> = Vec::with_capacity(n * list_size);
    let frozen = mask.as_slice();
    let mut candidates: Vec<Candidate> = Vec::with_capacity(2 * list_size);

    for phi in 0..n {
        for w in work.iter_mut() {
            update_llrs(w, phi, depth);
        }
        if frozen[phi] {
            for w in work.iter_mut() {
                let l = w.llr[depth][0];
                w.metric += penalty(l, 0);
                w.tail = push_history(&mut history, w.tail, 0);
                update_partial_sums(w, phi, depth, 0);
            }
            continue;
        }

        candidates.clear();
        for (i, w) in work.iter().enumerate() {
            let l = w.llr[depth][0];
            for bit in 0..2u8 {
                let p = penalty(l, bit);
                candidates.push(Candidate {
                    metric: w.metric + p,
                    rank: w.rank,
                    penalty: p,
                    bit,
                    parent: i,
                });
            }
        }
        candidates.sort_unstable_by(candidate_order);
        candidates.truncate(list_size);

        let mut children = alloc::vec![0u8; work.len()];
        for c in &candidates {
            children[c.parent] += 1;
        }
        let mut old: Vec<Option<Work>> = work.drain(..).map(Some).collect();
        for c in &candidates {
            let mut w = if children[c.parent] > 1 {
                children[c.parent] -= 1;
                old[c.parent].as_ref().expect("parent present").clone()
            } else {
                old[c.parent].take().expect("parent present")
            };
            w.metric = c.metric;
            w.tail = push_history(&mut history, w.tail, c.bit);
            update_partial_sums(&mut w, phi, depth, c.bit);
            work.push(w);
        }

        // Children of a lower-ranked parent precede those of a higher-ranked
        // one; siblings order by bit.
        let mut by_lex: Vec<usize> = (0..work.len()).collect();
        by_lex.sort_unstable_by(|&a, &b| {
            (work[a].rank, candidates[a].bit).cmp(&(work[b].rank, candidates[b].bit))
        });
        for (r, &i) in by_lex.iter().enumerate() {
            work[i].rank = r as u32;
        }
    }

    let mut out: Vec<(u32, DecoderPath)> = work
        .into_iter()
        .map(|w| {
            let mut block = alloc::vec![0u8; n];
            let mut node = w.tail;
            for slot in block.iter_mut().rev() {
                let (parent, bit) = history[node as usize];
                *slot = bit;
                node = parent;
            }
            let codeword = if depth == 0 {
                block.clone()
            } else {
                let c = w.partial[0].as_ref().clone();
                debug_assert_eq!(c, {
                    let mut x = block.clone();
                    polar_transform_in_place(&mut x).ok();
                    x
                });
                c
            };
            let base = &paths[w.origin];
            let mut bits = Vec::with_capacity(base.bits.len() + n);
            bits.extend_from_slice(&base.bits);
            bits.extend_from_slice(&block);
            let mut codewords = base.codewords.clone();
            codewords.push(codeword);
            (
                w.rank,
                DecoderPath {
                    bits,
                    codewords,
                    metric: w.metric,
                },
            )
        })
        .collect();
    out.sort_by(|a, b| a.1.metric.total_cmp(&b.1.metric).then(a.0.cmp(&b.0)));
    Ok(out.into_iter().map(|(_, p)| p).collect())
}

#[inline]
fn penalty(l: Llr, bit: u8) -> f64 {
    let base = softplus(-l.abs());
    if hard_decision(l) == bit {
        base
    } else {
        base + l.abs()
    }
}

fn push_history(history: &mut Vec<(u32, u8)>, parent: u32, bit: u8) -> u32 {
    history.push((parent, bit));
    (history.len() - 1) as u32
}

/// Brings the LLR layers of `w` up to date for decoding bit `phi`.
fn update_llrs(w: &mut Work, phi: usize, depth: usize) {
    if depth == 0 {
        return;
    }
    let start = if phi == 0 {
        1
    } else {
        depth - phi.trailing_zeros() as usize
    };
    for layer in start..=depth {
        let (lower, upper) = w.llr.split_at_mut(layer);
        let prev = &lower[layer - 1];
        let out = Rc::make_mut(&mut upper[0]);
        let h = out.len();
        let (left, right) = prev.split_at(h);
        if layer == start && phi != 0 {
            // Right child of the node at layer - 1: needs the left sibling's
            // partial sums.
            let left_bits = &w.partial[layer - 1][..h];
            for i in 0..h {
                out[i] = g_update(left[i], right[i], left_bits[i]);
            }
        } else {
            for i in 0..h {
                out[i] = boxplus(left[i], right[i]);
            }
        }
    }
}

/// Feeds decided bit `bit` at position `phi` back into the partial sums.
fn update_partial_sums(w: &mut Work, phi: usize, depth: usize, bit: u8) {
    if depth == 0 {
        return;
    }
    // The leaf is the child at layer `depth`; walk up while it is a right child.
    let mut layer = depth;
    loop {
        let is_right = (phi >> (depth - layer)) & 1 == 1;
        let (lower, upper) = w.partial.split_at_mut(layer);
        let parent = Rc::make_mut(&mut lower[layer - 1]);
        let h = parent.len() / 2;
        let child: &[u8] = if layer == depth {
            core::slice::from_ref(&bit)
        } else {
            &upper[0][..]
        };
        if !is_right {
            parent[..h].copy_from_slice(child);
            return;
        }
        parent[h..].copy_from_slice(child);
        let (lo, hi) = parent.split_at_mut(h);
        for (a, b) in lo.iter_mut().zip(hi.iter()) {
            *a ^= *b;
        }
        if layer == 1 {
            return;
        }
        layer -= 1;
    }
}
