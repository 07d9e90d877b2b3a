use rand::Rng as _;
use rayon::prelude::*;

use super::ks::TestResult;
use crate::error::{Error, Result};
use crate::rng;

pub const MIN_COPULA_PAIRS: usize = 30;
pub const MIN_BOOTSTRAP: usize = 100;

/// Average ranks (1-based); tied values share the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i+1 ..= j share the average rank
        let r = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Pseudo-observations `rank / (n + 1)` of each coordinate.
pub fn pseudo_observations(pairs: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    average_ranks(&xs)
        .into_iter()
        .zip(average_ranks(&ys))
        .map(|(a, b)| (a / (n + 1.0), b / (n + 1.0)))
        .collect()
}

/// Empirical copula `C_n(u, v)`: share of pseudo-observations in `[0, u] × [0, v]`.
pub fn empirical_copula(pairs: &[(f64, f64)], u: f64, v: f64) -> f64 {
    let obs = pseudo_observations(pairs);
    empirical_copula_of(&obs, u, v)
}

pub(crate) fn empirical_copula_of(obs: &[(f64, f64)], u: f64, v: f64) -> f64 {
    obs.iter().filter(|p| p.0 <= u && p.1 <= v).count() as f64 / obs.len() as f64
}

/// `S_n = Σ_i (C_n(U_i, V_i) − U_i V_i)²` over the pseudo-observations.
///
/// Dominance counts come from a Fenwick tree over the second coordinate,
/// `O(n log n)`.
pub fn cramer_von_mises(obs: &[(f64, f64)]) -> f64 {
    let n = obs.len();
    let mut vs: Vec<f64> = obs.iter().map(|p| p.1).collect();
    vs.sort_by(f64::total_cmp);
    vs.dedup();
    let mut tree = vec![0u32; vs.len() + 1];
    let slot = |v: f64| vs.partition_point(|&x| x <= v);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| obs[a].0.total_cmp(&obs[b].0));
    let mut stat = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && obs[order[j]].0 == obs[order[i]].0 {
            j += 1;
        }
        for &k in &order[i..j] {
            let mut pos = slot(obs[k].1);
            while pos < tree.len() {
                tree[pos] += 1;
                pos += pos & pos.wrapping_neg();
            }
        }
        for &k in &order[i..j] {
            let mut pos = slot(obs[k].1);
            let mut count = 0u32;
            while pos > 0 {
                count += tree[pos];
                pos -= pos & pos.wrapping_neg();
            }
            let (u, v) = obs[k];
            let d = count as f64 / n as f64 - u * v;
            stat += d * d;
        }
        i = j;
    }
    stat
}

/// Cramér–von Mises goodness-of-fit test of the independence copula.
///
/// The p-value is the share of `n_bootstrap` replicates, each a fresh sample of
/// independent uniform pairs of the same size run through the same
/// pseudo-observation step, whose statistic meets or exceeds the observed one.
/// Replicate `b` draws from sub-stream `b` of `seed`.
pub fn copula_gof_independence(
    pairs: &[(f64, f64)],
    n_bootstrap: usize,
    seed: u64,
) -> Result<TestResult> {
    if pairs.len() < MIN_COPULA_PAIRS {
        return Err(Error::InsufficientData {
            needed: MIN_COPULA_PAIRS,
            got: pairs.len(),
        });
    }
    if n_bootstrap < MIN_BOOTSTRAP {
        return Err(Error::InsufficientData {
            needed: MIN_BOOTSTRAP,
            got: n_bootstrap,
        });
    }
    let observed = cramer_von_mises(&pseudo_observations(pairs));
    let n = pairs.len();
    let exceed = (0..n_bootstrap as u64)
        .into_par_iter()
        .filter(|&b| {
            let mut rng = rng::substream(seed, b);
            let sample: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
            cramer_von_mises(&pseudo_observations(&sample)) >= observed
        })
        .count();
    Ok(TestResult {
        statistic: observed,
        p_value: exceed as f64 / n_bootstrap as f64,
    })
}
