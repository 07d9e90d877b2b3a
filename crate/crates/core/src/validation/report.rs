use serde::{Deserialize, Serialize};

use super::copula::copula_gof_independence;
use super::kendall::{adjacent_pairs, kendall_tau_test};
use super::ks::{ks_uniformity_test, TestResult};
use super::rescale::{rescale, uniformize, RescaledIsis, UniformizedIsis};
use crate::error::{Error, Result};
use crate::estimators::{conditional_intensity_path, FittedEstimator, IntensityPath};
use crate::isi::SpikeTrain;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ValidationConfig {
    pub level: f64,
    pub n_bootstrap: usize,
    pub seed: u64,
    /// Step of the intensity path that gets integrated.
    pub grid_step: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            level: 0.05,
            n_bootstrap: 1000,
            seed: 0,
            grid_step: 0.01,
        }
    }
}

impl ValidationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::rejected(format!("level must lie in (0, 1), got {}", self.level)));
        }
        if !(self.grid_step > 0.0 && self.grid_step.is_finite()) {
            return Err(Error::rejected("grid_step must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
}

impl TestVerdict {
    fn at_level(r: TestResult, level: f64) -> Self {
        TestVerdict {
            statistic: r.statistic,
            p_value: r.p_value,
            reject: r.p_value < level,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n_transformed: usize,
    pub level: f64,
    pub n_bootstrap: usize,
    pub seed: u64,
    pub grid_step: f64,
    /// Kolmogorov–Smirnov against Uniform[0, 1].
    pub uniformity: TestVerdict,
    /// Kendall's tau of adjacent transformed intervals.
    pub kendall: TestVerdict,
    /// Cramér–von Mises test of the independence copula.
    pub copula: TestVerdict,
}

#[derive(Debug, Clone)]
pub struct ValidationRun {
    pub path: IntensityPath,
    pub rescaled: RescaledIsis,
    pub uniformized: UniformizedIsis,
    pub report: ValidationReport,
}

pub fn validate(
    train: &SpikeTrain,
    fit: &FittedEstimator,
    config: &ValidationConfig,
) -> Result<ValidationReport> {
    validate_detailed(train, fit, config).map(|run| run.report)
}

/// Estimate the path, rescale, uniformize, then run all three tests.
pub fn validate_detailed(
    train: &SpikeTrain,
    fit: &FittedEstimator,
    config: &ValidationConfig,
) -> Result<ValidationRun> {
    config.validate()?;
    let path = conditional_intensity_path(fit, train, config.grid_step)?;
    let rescaled = rescale(train, &path)?;
    let (uniformized, report) = run_tests(&rescaled, config)?;
    Ok(ValidationRun {
        path,
        rescaled,
        uniformized,
        report,
    })
}

/// Runs the tests on already rescaled intervals.
pub fn validate_rescaled(rescaled: &RescaledIsis, config: &ValidationConfig) -> Result<ValidationReport> {
    run_tests(rescaled, config).map(|(_, r)| r)
}

fn run_tests(
    rescaled: &RescaledIsis,
    config: &ValidationConfig,
) -> Result<(UniformizedIsis, ValidationReport)> {
    config.validate()?;
    let z = uniformize(rescaled);
    let pairs = adjacent_pairs(&z.values);
    let uniformity = ks_uniformity_test(&z)?;
    let kendall = kendall_tau_test(&pairs)?;
    let copula = copula_gof_independence(&pairs, config.n_bootstrap, config.seed)?;
    let report = ValidationReport {
        n_transformed: z.len(),
        level: config.level,
        n_bootstrap: config.n_bootstrap,
        seed: config.seed,
        grid_step: config.grid_step,
        uniformity: TestVerdict::at_level(uniformity, config.level),
        kendall: TestVerdict::at_level(kendall, config.level),
        copula: TestVerdict::at_level(copula, config.level),
    };
    Ok((z, report))
}
