use serde::{Deserialize, Serialize};

use super::rescale::UniformizedIsis;
use crate::error::{Error, Result};
use crate::special::kolmogorov_sf;

pub const MIN_KS_SAMPLE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// `sup |F_n(z) − z|` of a sample against Uniform[0, 1].
///
/// The empirical CDF is right-continuous, so both `i/n − z_(i)` and
/// `z_(i) − (i−1)/n` are checked.
pub fn ks_statistic(values: &[f64]) -> f64 {
    let mut z = values.to_vec();
    z.sort_by(f64::total_cmp);
    let n = z.len() as f64;
    z.iter()
        .enumerate()
        .map(|(i, &x)| {
            let x = x.clamp(0.0, 1.0);
            let above = (i + 1) as f64 / n - x;
            let below = x - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// One-sample Kolmogorov–Smirnov test against Uniform[0, 1] with the
/// asymptotic p-value `Q_K(√n D)`.
pub fn ks_uniformity_test(z: &UniformizedIsis) -> Result<TestResult> {
    ks_uniformity_test_values(&z.values)
}

pub fn ks_uniformity_test_values(values: &[f64]) -> Result<TestResult> {
    if values.len() < MIN_KS_SAMPLE {
        return Err(Error::InsufficientData {
            needed: MIN_KS_SAMPLE,
            got: values.len(),
        });
    }
    let d = ks_statistic(values);
    let p = kolmogorov_sf((values.len() as f64).sqrt() * d);
    Ok(TestResult {
        statistic: d,
        p_value: p,
    })
}
