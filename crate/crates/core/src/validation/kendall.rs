use super::ks::TestResult;
use crate::error::{Error, Result};
use crate::special::normal_sf;

pub const MIN_KENDALL_PAIRS: usize = 10;

/// Consecutive couples `(x_i, x_{i+1})`.
pub fn adjacent_pairs(values: &[f64]) -> Vec<(f64, f64)> {
    values.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Kendall's tau-b; ties in either coordinate are removed from the normalizer.
///
/// Knight's `O(n log n)` algorithm: sort by `(x, y)`, then count the
/// discordant couples as the inversions of a merge sort on `y`.
pub fn kendall_tau(pairs: &[(f64, f64)]) -> f64 {
    let n = pairs.len();
    if n < 2 {
        return 0.0;
    }
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let tie_pairs = |run: u64| run * (run - 1) / 2;
    let (mut ties_x, mut ties_xy) = (0u64, 0u64);
    let (mut run_x, mut run_xy) = (1u64, 1u64);
    for w in sorted.windows(2) {
        if w[1].0 == w[0].0 {
            run_x += 1;
            if w[1].1 == w[0].1 {
                run_xy += 1;
            } else {
                ties_xy += tie_pairs(run_xy);
                run_xy = 1;
            }
        } else {
            ties_x += tie_pairs(run_x);
            ties_xy += tie_pairs(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    ties_x += tie_pairs(run_x);
    ties_xy += tie_pairs(run_xy);

    let mut ys: Vec<f64> = sorted.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let swaps = merge_count(&mut ys, &mut buf);

    let mut ties_y = 0u64;
    let mut run_y = 1u64;
    for w in ys.windows(2) {
        if w[1] == w[0] {
            run_y += 1;
        } else {
            ties_y += tie_pairs(run_y);
            run_y = 1;
        }
    }
    ties_y += tie_pairs(run_y);

    let n0 = (n as u64) * (n as u64 - 1) / 2;
    let score = n0 as f64 - ties_x as f64 - ties_y as f64 + ties_xy as f64 - 2.0 * swaps as f64;
    let denom = ((n0 - ties_x) as f64 * (n0 - ties_y) as f64).sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    score / denom
}

/// Sorts `v` ascending and returns the number of strict inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (left, right) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(left, bl) + merge_count(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Tau with a two-sided p-value from the normal approximation
/// `Var(τ) = 2(2n + 5) / (9 n (n − 1))`.
pub fn kendall_tau_test(pairs: &[(f64, f64)]) -> Result<TestResult> {
    let n = pairs.len();
    if n < MIN_KENDALL_PAIRS {
        return Err(Error::InsufficientData {
            needed: MIN_KENDALL_PAIRS,
            got: n,
        });
    }
    let tau = kendall_tau(pairs);
    let nf = n as f64;
    let var = 2.0 * (2.0 * nf + 5.0) / (9.0 * nf * (nf - 1.0));
    let z = tau / var.sqrt();
    Ok(TestResult {
        statistic: tau,
        p_value: (2.0 * normal_sf(z.abs())).min(1.0),
    })
}
