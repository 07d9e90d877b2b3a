#![allow(dead_code)]

use spikerate::generators::{gen_fgm_exponential, FgmExpParams};
use spikerate::oracles::ExpRefractoryModel;
use spikerate::IsiSequence;

pub const RATE: f64 = 1.0;
pub const DELTA: f64 = 0.5;

pub fn fgm(n: usize, alpha: f64, seed: u64) -> IsiSequence {
    gen_fgm_exponential(
        n,
        &FgmExpParams {
            rate: RATE,
            refractory: DELTA,
            alpha,
            seed,
        },
    )
    .unwrap()
}

pub fn model(alpha: f64) -> ExpRefractoryModel {
    ExpRefractoryModel::new(RATE, DELTA, alpha).unwrap()
}

pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Null standard error of Kendall's tau for `n` pairs.
pub fn kendall_se(n: usize) -> f64 {
    let n = n as f64;
    (2.0 * (2.0 * n + 5.0) / (9.0 * n * (n - 1.0))).sqrt()
}

/// Kendall's tau of the FGM copula, `4 ∫∫ C dC − 1`, by a midpoint double sum.
pub fn fgm_tau_brute_force(alpha: f64) -> f64 {
    let m = 400;
    let h = 1.0 / m as f64;
    let mut acc = 0.0;
    for i in 0..m {
        let u = (i as f64 + 0.5) * h;
        for j in 0..m {
            let v = (j as f64 + 0.5) * h;
            let c = u * v * (1.0 + alpha * (1.0 - u) * (1.0 - v));
            let dens = 1.0 + alpha * (1.0 - 2.0 * u) * (1.0 - 2.0 * v);
            acc += c * dens;
        }
    }
    4.0 * acc * h * h - 1.0
}
