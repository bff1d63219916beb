//! Reference computations that share no code with the library.

use std::f64::consts::{LN_2, PI};

/// Nodes and weights of the `n`-point Gauss–Hermite rule for
/// `∫ e^{-t²} f(t) dt`, by Newton iteration on the orthonormal recurrence.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let pim4 = PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let step = p1 / pp;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `I(X;Y)` in bits for equiprobable inputs `points` on `Y = X + σZ`.
pub fn awgn_mutual_information(points: &[f64], sigma: f64, nodes: usize) -> f64 {
    let (t, w) = gauss_hermite(nodes);
    let m = points.len() as f64;
    let mut loss = 0.0;
    for &xi in points {
        for (&tk, &wk) in t.iter().zip(&w) {
            let z = std::f64::consts::SQRT_2 * tk;
            let exps: Vec<f64> = points
                .iter()
                .map(|&xj| {
                    let d = xi - xj;
                    -(d * d + 2.0 * d * sigma * z) / (2.0 * sigma * sigma)
                })
                .collect();
            let top = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lse = top + exps.iter().map(|e| (e - top).exp()).sum::<f64>().ln();
            loss += wk / PI.sqrt() * lse / LN_2;
        }
    }
    m.log2() - loss / m
}

/// `1 - E[log2(1 + e^{-L})]` with `L ~ N(σ²/2, σ²)`, by composite Simpson.
pub fn j_integral(sigma: f64) -> f64 {
    let mean = sigma * sigma / 2.0;
    let (lo, hi) = (mean - 14.0 * sigma, mean + 14.0 * sigma);
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    let f = |l: f64| {
        let z = (l - mean) / sigma;
        let density = (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt());
        let softplus = if l > 0.0 { (-l).exp().ln_1p() } else { -l + l.exp().ln_1p() };
        density * softplus / LN_2
    };
    let mut acc = f(lo) + f(hi);
    for i in 1..steps {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h);
    }
    1.0 - acc * h / 3.0
}

/// Noise standard deviation of 8-ASK `{±1, ±3, ±5, ±7}` (energy 21) at `snr_db`.
pub fn ask8_sigma(snr_db: f64) -> f64 {
    (21.0 / 10f64.powf(snr_db / 10.0)).sqrt()
}

pub const ASK8: [f64; 8] = [-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0];
