use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tuning of the kernel estimators.
///
/// Kernels are Gaussian densities with standard deviation `kernel_scale`,
/// evaluated at `(x − T_i)/c_n` and divided by `c_n`, where
/// `c_n = n^(-bandwidth_exponent)`. The effective smoothing scale is therefore
/// `kernel_scale · c_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimatorConfig {
    pub kernel_scale: f64,
    pub bandwidth_exponent: f64,
    pub survival_floor: f64,
    /// Step of the trapezoidal rule behind every survival integral.
    pub eval_step: f64,
    /// Upper end `M` of the estimation window `[0, M]`. `None` resolves to the
    /// 99th percentile of the fitted sample.
    pub domain_cap: Option<f64>,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            kernel_scale: 0.2,
            bandwidth_exponent: 0.2,
            survival_floor: 1e-6,
            eval_step: 0.01,
            domain_cap: None,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kernel_scale > 0.0 && self.kernel_scale.is_finite()) {
            return Err(Error::rejected("kernel_scale must be positive"));
        }
        // c_n → 0, n c_n → ∞ and n c_n⁴ / ln n → ∞ all hold for 0 < β < 1/4
        if !(self.bandwidth_exponent > 0.0 && self.bandwidth_exponent < 0.25) {
            return Err(Error::rejected(format!(
                "bandwidth_exponent must lie in (0, 0.25), got {}",
                self.bandwidth_exponent
            )));
        }
        if !(self.survival_floor > 0.0 && self.survival_floor <= 1e-3) {
            return Err(Error::rejected("survival_floor must lie in (0, 1e-3]"));
        }
        if !(self.eval_step > 0.0 && self.eval_step.is_finite()) {
            return Err(Error::rejected("eval_step must be positive"));
        }
        if let Some(m) = self.domain_cap {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::rejected("domain_cap must be positive"));
            }
        }
        Ok(())
    }

    /// `c_n = n^(-β)`.
    pub fn bandwidth(&self, n: usize) -> f64 {
        (n as f64).powf(-self.bandwidth_exponent)
    }
}
