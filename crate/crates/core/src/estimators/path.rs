use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::FittedEstimator;
use crate::error::{Error, Result};
use crate::isi::SpikeTrain;

/// Intensity on one inter-spike interval `(start, end]`.
///
/// `times[0] == start` carries the right limit after the spike; the last time
/// is `end`. `closed` is false for the trailing piece after the final spike.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSegment {
    pub start: f64,
    pub end: f64,
    pub conditioning: f64,
    pub closed: bool,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Piecewise conditional intensity over `(l_1, end]`, one segment per interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityPath {
    segments: Vec<PathSegment>,
}

struct SegmentSpec {
    start: f64,
    end: f64,
    tau: f64,
    closed: bool,
}

fn local_grid(len: f64, step: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut xs = Vec::with_capacity((len / step) as usize + 2 + 2 * breakpoints.len());
    let mut k = 0usize;
    loop {
        let x = k as f64 * step;
        if x >= len {
            break;
        }
        xs.push(x);
        k += 1;
    }
    for &b in breakpoints {
        if b > 0.0 && b < len {
            xs.push(b);
            let after = b.next_up();
            if after < len {
                xs.push(after);
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.push(len);
    xs
}

impl IntensityPath {
    pub fn new(segments: Vec<PathSegment>) -> Self {
        IntensityPath { segments }
    }

    pub fn segments(&self) -> &[PathSegment] {
        &self.segments
    }

    /// All `(t, λ(t))` samples in time order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.segments
            .iter()
            .flat_map(|s| s.times.iter().copied().zip(s.values.iter().copied()))
    }

    /// Builds a path from an intensity given as a function of the previous
    /// interval and the time elapsed since the last spike.
    ///
    /// `breakpoints` are elapsed times where the intensity may jump; each is
    /// sampled at the point itself and just after it.
    pub fn from_elapsed_fn<F>(
        train: &SpikeTrain,
        grid_step: f64,
        breakpoints: &[f64],
        intensity: F,
    ) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        Self::build(train, grid_step, train.horizon(), breakpoints, |tau, xs| {
            xs.iter().map(|&x| intensity(tau, x)).collect()
        })
    }

    pub(crate) fn build<F>(
        train: &SpikeTrain,
        grid_step: f64,
        until: f64,
        breakpoints: &[f64],
        evaluate: F,
    ) -> Result<Self>
    where
        F: Fn(f64, &[f64]) -> Vec<f64> + Sync,
    {
        if !(grid_step > 0.0 && grid_step.is_finite()) {
            return Err(Error::rejected("grid step must be positive"));
        }
        if until > train.horizon() {
            return Err(Error::rejected(format!(
                "evaluation grid ends at {until}, beyond the horizon {}",
                train.horizon()
            )));
        }
        let epochs = train.epochs();
        if epochs.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let mut specs = Vec::with_capacity(epochs.len());
        for i in 0..epochs.len() {
            let start = epochs[i];
            if start >= until {
                break;
            }
            let tau = start - if i == 0 { 0.0 } else { epochs[i - 1] };
            let (end, closed) = match epochs.get(i + 1) {
                Some(&e) if e <= until => (e, true),
                _ => (until, false),
            };
            specs.push(SegmentSpec {
                start,
                end,
                tau,
                closed,
            });
        }
        let segments = specs
            .par_iter()
            .map(|s| {
                let xs = local_grid(s.end - s.start, grid_step, breakpoints);
                let values = evaluate(s.tau, &xs);
                let mut times: Vec<f64> = xs.iter().map(|&x| s.start + x).collect();
                *times.last_mut().unwrap() = s.end;
                PathSegment {
                    start: s.start,
                    end: s.end,
                    conditioning: s.tau,
                    closed: s.closed,
                    times,
                    values,
                }
            })
            .collect();
        Ok(IntensityPath { segments })
    }
}

/// Estimated conditional intensity `λ̂*(t) = ĥ(t − l_{i-1} | T_{i-1})` on
/// `(l_1, L]`. The first interval is left out: nothing conditions it.
///
/// The train may be the fitted sample itself or a held-out recording.
pub fn conditional_intensity_path(
    fit: &FittedEstimator,
    train: &SpikeTrain,
    grid_step: f64,
) -> Result<IntensityPath> {
    conditional_intensity_path_until(fit, train, grid_step, train.horizon())
}

pub fn conditional_intensity_path_until(
    fit: &FittedEstimator,
    train: &SpikeTrain,
    grid_step: f64,
    until: f64,
) -> Result<IntensityPath> {
    IntensityPath::build(train, grid_step, until, &[], |tau, xs| {
        let extent = xs.last().copied().unwrap_or(0.0);
        let slice = fit.conditional_slice_to(tau, extent, None);
        xs.iter().map(|&x| slice.hazard_unchecked(x)).collect()
    })
}
