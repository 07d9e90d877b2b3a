use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use spikerate::estimators::{conditional_intensity_path, fit, EstimatorConfig, FittedEstimator};
use spikerate::generators::{
    gen_fgm_exponential, gen_poisson, gen_two_compartment, FgmExpParams, TwoCompartmentParams,
};
use spikerate::oracles::ExpRefractoryModel;
use spikerate::validation::{
    adjacent_pairs, kendall_tau_test, validate_detailed, ValidationConfig, MIN_BOOTSTRAP,
};
use spikerate::IsiSequence;

use crate::args::{
    BicompArgs, EstimateArgs, EstimatorArgs, FgmArgs, InputArgs, OracleKind, PoissonArgs,
    SummaryArgs, ValidateArgs, SEED_ENV,
};
use crate::error::CliError;
use crate::io::{emit_json, read_input, sidecar, write_csv, write_json};

fn metadata<C: Serialize>(command: &str, config: &C, extra: serde_json::Value) -> serde_json::Value {
    let mut m = json!({
        "tool": "spikerate",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "seed_env": std::env::var(SEED_ENV).ok(),
    });
    if let (Some(m), serde_json::Value::Object(extra)) = (m.as_object_mut(), extra) {
        m.extend(extra);
    }
    m
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    path.as_deref()
        .ok_or_else(|| CliError::Config(format!("--{flag} is required")))
}

fn config_check(r: spikerate::Result<()>) -> Result<(), CliError> {
    r.map_err(CliError::config)
}

fn positive(value: f64, name: &str) -> Result<(), CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {value}")))
    }
}

fn write_isis(out: &Path, s: &IsiSequence) -> Result<(), CliError> {
    write_csv(
        out,
        "index,isi",
        s.isis().iter().enumerate().map(|(i, &t)| [i as f64, t]),
    )
}

pub fn simulate_poisson(a: PoissonArgs) -> Result<(), CliError> {
    let out = required(&a.out, "out")?;
    positive(a.rate, "rate")?;
    if a.n == 0 {
        return Err(CliError::Config("n must be at least 1".into()));
    }
    let s = gen_poisson(a.n, a.rate, a.seed)?;
    write_isis(out, &s)?;
    write_json(&sidecar(out), &metadata("simulate poisson", &a, json!({ "n_isis": s.len() })))
}

pub fn simulate_fgm(a: FgmArgs) -> Result<(), CliError> {
    let out = required(&a.out, "out")?;
    let params = FgmExpParams {
        rate: a.rate,
        refractory: a.delta,
        alpha: a.alpha,
        seed: a.seed,
    };
    config_check(params.validate())?;
    if a.n == 0 {
        return Err(CliError::Config("n must be at least 1".into()));
    }
    let s = gen_fgm_exponential(a.n, &params)?;
    write_isis(out, &s)?;
    write_json(&sidecar(out), &metadata("simulate fgm", &a, json!({ "n_isis": s.len() })))
}

pub fn simulate_bicomp(a: BicompArgs) -> Result<(), CliError> {
    let out = required(&a.out, "out")?;
    let params = TwoCompartmentParams {
        leak: a.alpha,
        coupling: a.alpha_r,
        drift: a.mu,
        noise: a.sigma,
        threshold: a.s,
        dt: a.dt,
        burn_in: a.burn_in,
        max_steps: a.max_steps,
        seed: a.seed,
    };
    config_check(params.validate())?;
    if a.n == 0 {
        return Err(CliError::Config("n must be at least 1".into()));
    }
    let (s, traj) = gen_two_compartment(&params, a.n, a.trajectory.is_some())?;
    write_isis(out, &s)?;
    if let (Some(path), Some(traj)) = (&a.trajectory, &traj) {
        let rows = traj
            .times
            .iter()
            .zip(&traj.x1)
            .zip(&traj.x2)
            .map(|((&t, &x1), &x2)| [t, x1, x2]);
        write_csv(path, "t,x1,x2", rows)?;
    }
    let extra = json!({ "n_isis": s.len(), "origin": s.origin() });
    write_json(&sidecar(out), &metadata("simulate bicomp", &a, extra))
}

fn estimator_config(a: &EstimatorArgs) -> Result<EstimatorConfig, CliError> {
    let c = a.to_config();
    config_check(c.validate())?;
    Ok(c)
}

fn load(input: &InputArgs) -> Result<(spikerate::SpikeTrain, IsiSequence), CliError> {
    read_input(required(&input.input, "input")?, input.format)
}

fn grid_to(cap: f64, step: f64) -> Vec<f64> {
    let n = (cap / step).floor() as usize;
    (0..=n).map(|k| k as f64 * step).filter(|&x| x <= cap).collect()
}

pub fn estimate(a: EstimateArgs) -> Result<(), CliError> {
    let out = required(&a.out, "out")?;
    let cfg = estimator_config(&a.estimator)?;
    positive(a.grid_step, "grid_step")?;
    positive(a.surface_step, "surface_step")?;
    let oracle = match a.oracle {
        OracleKind::None => None,
        OracleKind::Fgm => Some(ExpRefractoryModel::new(a.rate, a.delta, a.alpha).map_err(CliError::config)?),
    };
    let (train, isis) = load(&a.input)?;
    let fitted = fit(&isis, &cfg)?;
    let path = conditional_intensity_path(&fitted, &train, a.grid_step)?;

    let mut rows = Vec::new();
    for seg in path.segments() {
        for (&t, &v) in seg.times.iter().zip(&seg.values) {
            match &oracle {
                Some(m) => rows.push(vec![t, v, m.fgm_conditional_hazard(t - seg.start, seg.conditioning)]),
                None => rows.push(vec![t, v]),
            }
        }
    }
    let header = if oracle.is_some() { "t,lambda_hat,lambda_oracle" } else { "t,lambda_hat" };
    write_csv(out, header, &rows)?;
    if let Some(surface) = &a.hazard_surface {
        write_surface(surface, &fitted, a.surface_step)?;
    }
    let extra = json!({
        "fit": fitted.summary(),
        "n_points": rows.len(),
        "n_segments": path.segments().len(),
    });
    write_json(&sidecar(out), &metadata("estimate", &a, extra))
}

fn write_surface(path: &Path, fitted: &FittedEstimator, step: f64) -> Result<(), CliError> {
    let g = grid_to(fitted.domain_cap(), step);
    let mut rows = Vec::with_capacity(g.len() * g.len());
    for &tau in &g {
        let slice = fitted.conditional_slice(tau)?;
        for &t in &g {
            rows.push([tau, t, slice.hazard(t)?]);
        }
    }
    write_csv(path, "tau,t,hazard", rows)
}

pub fn validate(a: ValidateArgs) -> Result<(), CliError> {
    let cfg = estimator_config(&a.estimator)?;
    let vcfg = ValidationConfig {
        level: a.level,
        n_bootstrap: a.n_bootstrap,
        seed: a.seed,
        grid_step: a.grid_step,
    };
    config_check(vcfg.validate())?;
    if a.n_bootstrap < MIN_BOOTSTRAP {
        return Err(CliError::Config(format!("n_bootstrap must be at least {MIN_BOOTSTRAP}")));
    }
    let (train, isis) = load(&a.input)?;
    let fitted = fit(&isis, &cfg)?;
    let run = validate_detailed(&train, &fitted, &vcfg)?;
    if let Some(path) = &a.transformed {
        let rows = run
            .rescaled
            .values
            .iter()
            .zip(&run.uniformized.values)
            .enumerate()
            .map(|(i, (&r, &z))| [i as f64, r, z]);
        write_csv(path, "index,rescaled,uniform", rows)?;
    }
    let extra = json!({ "fit": fitted.summary(), "report": run.report });
    emit_json(a.out.as_deref(), &metadata("validate", &a, extra))
}

pub fn summary(a: SummaryArgs) -> Result<(), CliError> {
    let (train, isis) = load(&a.input)?;
    let view = train.counting();
    let mut counts = Vec::with_capacity(a.at.len());
    for &t in &a.at {
        let rate = view.count_rate(t).map_err(CliError::config)?;
        counts.push(json!({ "t": t, "count": view.count_at(t)?, "rate": rate }));
    }
    let kendall = kendall_tau_test(&adjacent_pairs(isis.isis()))?;
    let extra = json!({
        "n_spikes": train.len(),
        "horizon": train.horizon(),
        "n_isis": isis.len(),
        "mean_rate": isis.mean_rate()?,
        "instantaneous_mean_rate": isis.instantaneous_mean_rate()?,
        "count_rates": counts,
        "kendall": { "tau": kendall.statistic, "p_value": kendall.p_value },
    });
    emit_json(a.out.as_deref(), &metadata("summary", &a, extra))
}
