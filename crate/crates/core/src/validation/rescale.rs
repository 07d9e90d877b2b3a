use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::IntensityPath;
use crate::isi::SpikeTrain;
use crate::quadrature::trapezoid;

/// Time-rescaled intervals `T̃_i = ∫_{l_{i-1}}^{l_i} λ(u) du`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaledIsis {
    pub values: Vec<f64>,
}

/// `Z_i = 1 − exp(−T̃_i)`, uniform on `[0, 1)` under a correct intensity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformizedIsis {
    pub values: Vec<f64>,
}

impl RescaledIsis {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl UniformizedIsis {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Integrates the path over every interval `(l_{i-1}, l_i]`, `i ≥ 2`.
pub fn rescale(train: &SpikeTrain, path: &IntensityPath) -> Result<RescaledIsis> {
    let epochs = train.epochs();
    let segments = path.segments();
    let mut values = Vec::with_capacity(epochs.len().saturating_sub(1));
    for i in 1..epochs.len() {
        let (l0, l1) = (epochs[i - 1], epochs[i]);
        let k = segments.partition_point(|s| s.start < l0);
        let seg = segments
            .get(k)
            .filter(|s| s.start == l0)
            .ok_or_else(|| {
                Error::rejected_at(format!("intensity path has a gap: no segment covers ({l0}, {l1}]"), i)
            })?;
        let covered = seg.end == l1
            && seg.times.len() >= 2
            && seg.times.len() == seg.values.len()
            && seg.times[0] == l0
            && seg.times[seg.times.len() - 1] == l1;
        if !covered {
            let (a, b) = (
                seg.times.first().copied().unwrap_or(f64::NAN),
                seg.times.last().copied().unwrap_or(f64::NAN),
            );
            return Err(Error::rejected_at(
                format!("intensity path has a gap inside ({l0}, {l1}]: segment spans [{a}, {b}]"),
                i,
            ));
        }
        if seg.times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::rejected_at("segment times are not ordered", i));
        }
        if seg.values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::rejected_at("intensity must be finite and non-negative", i));
        }
        values.push(trapezoid(&seg.times, &seg.values));
    }
    Ok(RescaledIsis { values })
}

/// `∫ λ` from the start of the path to `t`, in one pass over all samples.
pub fn cumulative_intensity(path: &IntensityPath, t: f64) -> f64 {
    let mut total = 0.0;
    for seg in path.segments() {
        if seg.start >= t {
            break;
        }
        for (w, v) in seg.times.windows(2).zip(seg.values.windows(2)) {
            if w[0] >= t {
                break;
            }
            if w[1] <= t {
                total += 0.5 * (w[1] - w[0]) * (v[0] + v[1]);
            } else {
                let frac = (t - w[0]) / (w[1] - w[0]);
                let vt = v[0] + frac * (v[1] - v[0]);
                total += 0.5 * (t - w[0]) * (v[0] + vt);
            }
        }
    }
    total
}

pub fn uniformize(rescaled: &RescaledIsis) -> UniformizedIsis {
    UniformizedIsis {
        values: rescaled.values.iter().map(|&x| -(-x).exp_m1()).collect(),
    }
}
