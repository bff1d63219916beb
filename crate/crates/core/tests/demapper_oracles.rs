//! Demappers checked against direct probability sums over the label tables.

use pcm_core::demapper::{exact_bit_llr, Demapper, DemapperKind, OpCounter};
use pcm_core::modulation::{snr_to_sigma, Constellation};
use pcm_core::polar::LLR_MAX;
use pcm_core::rates::{mi_histogram_estimate, mi_matched, sample_levels};

const AMPLITUDES: [f64; 8] = [-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0];
const BRGC: [&str; 8] = ["000", "001", "011", "010", "110", "111", "101", "100"];
const MM_POLAR: [&str; 8] = ["000", "111", "001", "110", "010", "101", "011", "100"];
const LSB_BRGC: [&str; 8] = ["000", "100", "110", "010", "011", "111", "101", "001"];
const SP_POLAR: [&str; 8] = ["000", "100", "010", "110", "001", "101", "011", "111"];

fn bit(label: &str, level: usize) -> u8 {
    label.as_bytes()[level - 1] - b'0'
}

/// ln P(b_level = 0 | y, prefix) / P(b_level = 1 | y, prefix) by plain sums,
/// clipped like every demapper output. The prefix constrains the first
/// `prefix.len()` bits.
fn direct_llr(y: f64, sigma: f64, labels: &[&str; 8], level: usize, prefix: &[u8]) -> f64 {
    let (mut p0, mut p1) = (0.0, 0.0);
    for (x, lab) in AMPLITUDES.iter().zip(labels) {
        if prefix.iter().enumerate().any(|(l, &b)| bit(lab, l + 1) != b) {
            continue;
        }
        let w = (-(y - x) * (y - x) / (2.0 * sigma * sigma)).exp();
        if bit(lab, level) == 0 {
            p0 += w;
        } else {
            p1 += w;
        }
    }
    (p0 / p1).ln().clamp(-LLR_MAX, LLR_MAX)
}

fn tanh_boxplus(a: f64, b: f64) -> f64 {
    2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh()
}

/// The mismatched network written out from the label transform
/// b1 = b~1 + b~2 + b~3, b2 = b~2 + b~3, b3 = b~3.
fn network(aux: [f64; 3], level: usize, prefix: &[u8]) -> f64 {
    let sign = |b: u8| 1.0 - 2.0 * b as f64;
    match level {
        1 => tanh_boxplus(aux[0], tanh_boxplus(aux[1], aux[2])),
        2 => sign(prefix[0]) * aux[0] + tanh_boxplus(aux[1], aux[2]),
        _ => sign(prefix[1]) * aux[1] + aux[2],
    }
}

const PREFIXES: [&[u8]; 7] = [&[], &[0], &[1], &[0, 0], &[0, 1], &[1, 0], &[1, 1]];

#[test]
fn sp_demapper_matches_direct_sums() {
    let d = Demapper::new(DemapperKind::Sp, 1.1).unwrap();
    for y in [-7.9, -3.3, -0.2, 0.0, 0.6, 2.2, 5.0, 7.7] {
        for prefix in PREFIXES {
            let level = prefix.len() + 1;
            let got = d.demap_level(y, level, prefix).unwrap();
            let want = direct_llr(y, 1.1, &SP_POLAR, level, prefix);
            assert!((got - want).abs() < 1e-9, "y {y} prefix {prefix:?}: {got} vs {want}");
        }
    }
}

#[test]
fn mismatched_demappers_match_written_out_network() {
    for (kind, aux_labels) in [(DemapperKind::Mm, &BRGC), (DemapperKind::MmSp, &LSB_BRGC)] {
        let sigma = 1.3;
        let d = Demapper::new(kind, sigma).unwrap();
        for y in [-6.5, -2.1, -0.4, 0.5, 1.7, 4.4] {
            let aux = [1, 2, 3].map(|j| direct_llr(y, sigma, aux_labels, j, &[]));
            let mut got_aux = [0.0; 3];
            d.aux_llrs(y, &mut got_aux);
            for j in 0..3 {
                assert!((got_aux[j] - aux[j]).abs() < 1e-9);
            }
            for prefix in PREFIXES {
                let level = prefix.len() + 1;
                let got = d.demap_level(y, level, prefix).unwrap();
                let want = network(aux, level, prefix).clamp(-LLR_MAX, LLR_MAX);
                assert!((got - want).abs() < 1e-8, "{kind:?} y {y} {prefix:?}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn mm_level_one_is_mismatched() {
    let d = Demapper::new(DemapperKind::Mm, 1.0).unwrap();
    let mm = d.demap_level(0.5, 1, &[]).unwrap();
    let exact = direct_llr(0.5, 1.0, &MM_POLAR, 1, &[]);
    assert!((mm - exact).abs() > 1e-3, "{mm} vs {exact}");
}

#[test]
fn two_ask_closed_form() {
    for sigma in [0.3, 1.0, 2.5] {
        for y in [-2.0, -0.1, 0.0, 0.7, 1.4] {
            // labels[0] is the label of amplitude -1.
            let l = exact_bit_llr(y, sigma, &[1, 0], 1, &[]).unwrap();
            let want = (2.0 * y / (sigma * sigma)).clamp(-LLR_MAX, LLR_MAX);
            assert!((l - want).abs() < 1e-9);
        }
    }
}

#[test]
fn noiseless_symbols_are_decided_correctly() {
    for (kind, polar) in [
        (DemapperKind::Sp, &SP_POLAR),
        (DemapperKind::Mm, &MM_POLAR),
        (DemapperKind::MmSp, &SP_POLAR),
    ] {
        let d = Demapper::new(kind, 0.05).unwrap();
        for (x, lab) in AMPLITUDES.iter().zip(polar.iter()) {
            let bits = [bit(lab, 1), bit(lab, 2), bit(lab, 3)];
            for level in 1..=3 {
                let l = d.demap_level(*x, level, &bits[..level - 1]).unwrap();
                let decided = (l < 0.0) as u8;
                assert_eq!(decided, bits[level - 1], "{kind:?} x {x} level {level}");
            }
        }
    }
}

#[test]
fn sp_llrs_are_calibrated() {
    let sigma = snr_to_sigma(11.77, &Constellation::new(3).unwrap());
    let d = Demapper::new(DemapperKind::Sp, sigma).unwrap();
    let s = sample_levels(&d, 21, 200_000);
    for level in &s.polar {
        let hist = mi_histogram_estimate(level, 2000);
        let matched = mi_matched(level);
        let tol = 3.0 * (hist.std_error.powi(2) + matched.std_error.powi(2)).sqrt() + 0.005;
        assert!((hist.rate - matched.rate).abs() <= tol, "{} vs {}", hist.rate, matched.rate);
    }
}

#[test]
fn sp_needs_fewer_exponentials() {
    let count = |kind| {
        let d = Demapper::new(kind, 1.0).unwrap();
        let mut c = OpCounter::default();
        for prefix in [&[][..], &[1], &[1, 0]] {
            d.demap_level_counted(0.3, prefix.len() + 1, prefix, &mut c).unwrap();
        }
        c
    };
    let sp = count(DemapperKind::Sp);
    for kind in [DemapperKind::Mm, DemapperKind::MmSp] {
        let mm = count(kind);
        assert!(sp.exp_terms < mm.exp_terms);
        assert!(mm.boxplus > 0 && sp.boxplus == 0);
    }
}
