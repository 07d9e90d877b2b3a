//! Time-rescaling validation: integrate the intensity over each interval, map
//! the result to `[0, 1)`, then test uniformity and serial independence.

mod copula;
mod kendall;
mod ks;
mod report;
mod rescale;

pub use copula::{
    average_ranks, copula_gof_independence, cramer_von_mises, empirical_copula,
    pseudo_observations, MIN_BOOTSTRAP, MIN_COPULA_PAIRS,
};
pub use kendall::{adjacent_pairs, kendall_tau, kendall_tau_test, MIN_KENDALL_PAIRS};
pub use ks::{ks_statistic, ks_uniformity_test, ks_uniformity_test_values, TestResult, MIN_KS_SAMPLE};
pub use report::{validate, validate_detailed, validate_rescaled, TestVerdict, ValidationConfig, ValidationReport, ValidationRun};
pub use rescale::{cumulative_intensity, rescale, uniformize, RescaledIsis, UniformizedIsis};
