//! Kernel estimators of the interval densities, survivals and hazards, and
//! the conditional intensity assembled from them.

mod config;
mod fit;
mod kernel;
mod path;

pub use config::EstimatorConfig;
pub use fit::{fit, ConditionalSlice, FitSummary, FittedEstimator};
pub use kernel::{gaussian_kernel, kernel_density_estimate};
pub use path::{
    conditional_intensity_path, conditional_intensity_path_until, IntensityPath, PathSegment,
};
