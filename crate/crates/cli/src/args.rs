use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use spikerate::estimators::EstimatorConfig;

use crate::io::InputFormat;

pub const SEED_ENV: &str = "SPIKERATE_SEED";

#[derive(Debug, Parser)]
#[command(name = "spikerate", version, about = "Spike-train rate estimation and goodness-of-fit")]
pub struct Cli {
    /// JSON file whose keys override the flags. A top-level `config` object,
    /// as found in the metadata this tool writes, is used when present.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate an ISI sequence.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Estimate the conditional intensity path of a recording.
    Estimate(EstimateArgs),
    /// Rescale by the estimated intensity and test for unit-rate Poisson.
    Validate(ValidateArgs),
    /// Classical rate statistics and serial rank correlation.
    Summary(SummaryArgs),
}

#[derive(Debug, Subcommand)]
pub enum Simulate {
    /// Poisson process (exponential ISIs).
    Poisson(PoissonArgs),
    /// Refractory exponential ISIs with FGM serial dependence.
    Fgm(FgmArgs),
    /// Two-compartment stochastic neuron.
    Bicomp(BicompArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PoissonArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// ISI CSV to write; metadata goes next to it as `<out>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FgmArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    /// Refractory period.
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// FGM dependence parameter in [-1, 1].
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BicompArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Leak rate.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Coupling rate.
    #[arg(long, default_value_t = 0.5)]
    pub alpha_r: f64,
    /// Dendritic drift.
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub mu: f64,
    /// Dendritic noise.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Firing threshold.
    #[arg(long, default_value_t = 10.0)]
    pub s: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Spikes discarded before recording.
    #[arg(long, default_value_t = 100)]
    pub burn_in: usize,
    /// Euler step budget for the whole run.
    #[arg(long, default_value_t = 100_000_000)]
    pub max_steps: u64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the recorded membrane trajectory (`t,x1,x2`).
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct InputArgs {
    /// Spike times (one per line) or an `index,isi` CSV.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub format: InputFormat,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EstimatorArgs {
    /// Standard deviation of the Gaussian kernel before bandwidth scaling.
    #[arg(long, default_value_t = 0.2)]
    pub kernel_scale: f64,
    /// Bandwidth exponent: c_n = n^-beta, beta in (0, 0.25).
    #[arg(long, default_value_t = 0.2)]
    pub beta: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub survival_floor: f64,
    #[arg(long, default_value_t = 0.01)]
    pub eval_step: f64,
    /// Upper end of the estimation window; defaults to the 99th percentile.
    #[arg(long)]
    pub domain_cap: Option<f64>,
}

impl EstimatorArgs {
    pub fn to_config(&self) -> EstimatorConfig {
        EstimatorConfig {
            kernel_scale: self.kernel_scale,
            bandwidth_exponent: self.beta,
            survival_floor: self.survival_floor,
            eval_step: self.eval_step,
            domain_cap: self.domain_cap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    None,
    /// Refractory exponential with FGM dependence (`--rate`, `--delta`, `--alpha`).
    Fgm,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EstimateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub estimator: EstimatorArgs,
    /// Step of the intensity path grid.
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
    /// Path CSV (`t,lambda_hat`); metadata goes to `<out>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OracleKind::None)]
    pub oracle: OracleKind,
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Also write the conditional hazard on a `(tau, t)` grid over `[0, M]²`.
    #[arg(long)]
    pub hazard_surface: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    pub surface_step: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub estimator: EstimatorArgs,
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
    /// Significance level of every test.
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    #[arg(long, default_value_t = 1000)]
    pub n_bootstrap: usize,
    /// Seed of the copula bootstrap.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Report JSON; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Transformed intervals CSV (`index,rescaled,uniform`).
    #[arg(long)]
    pub transformed: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SummaryArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Times at which to report N(t)/t; repeatable.
    #[arg(long = "at")]
    pub at: Vec<f64>,
    /// Summary JSON; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
