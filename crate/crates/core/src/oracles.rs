//! Closed-form ground truth for shifted-exponential intervals, optionally
//! coupled by an FGM copula between consecutive intervals.
//!
//! With `u = F(τ)`, `v = F(t)` and `a = α(1 − 2u)`:
//!
//! ```text
//! f(t | τ) = f(t) · (1 + a (1 − 2v))
//! S(t | τ) = (1 − v) · (1 − a v)
//! h(t | τ) = f(t | τ) / S(t | τ)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isi::SpikeTrain;
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpRefractoryModel {
    pub rate: f64,
    pub refractory: f64,
    pub alpha: f64,
}

impl ExpRefractoryModel {
    pub fn new(rate: f64, refractory: f64, alpha: f64) -> Result<Self> {
        let m = ExpRefractoryModel {
            rate,
            refractory,
            alpha,
        };
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::rejected("rate must be positive"));
        }
        if !(refractory >= 0.0 && refractory.is_finite()) {
            return Err(Error::rejected("refractory period must be non-negative"));
        }
        if !(alpha.abs() <= 1.0) {
            return Err(Error::rejected("alpha must lie in [-1, 1]"));
        }
        Ok(m)
    }

    /// Marginal CDF `F(t) = 1 − exp(−λ(t − δ))` for `t ≥ δ`.
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= self.refractory {
            0.0
        } else {
            -(-self.rate * (t - self.refractory)).exp_m1()
        }
    }

    pub fn survival(&self, t: f64) -> f64 {
        if t <= self.refractory {
            1.0
        } else {
            (-self.rate * (t - self.refractory)).exp()
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        if t <= self.refractory {
            0.0
        } else {
            self.rate * (-self.rate * (t - self.refractory)).exp()
        }
    }

    /// Hazard of the marginal law: 0 inside the refractory period, `λ` after.
    pub fn unconditional_rate(&self, t: f64) -> f64 {
        if t < self.refractory {
            0.0
        } else {
            self.rate
        }
    }

    fn tilt(&self, tau: f64) -> f64 {
        self.alpha * (1.0 - 2.0 * self.cdf(tau))
    }

    /// Density of the next interval given the previous one was `tau`.
    /// Zero outside the support (`t ≤ δ` or `tau < δ`).
    pub fn fgm_conditional_density(&self, t: f64, tau: f64) -> f64 {
        if t <= self.refractory || tau < self.refractory {
            return 0.0;
        }
        let v = self.cdf(t);
        self.density(t) * (1.0 + self.tilt(tau) * (1.0 - 2.0 * v))
    }

    pub fn fgm_conditional_survival(&self, t: f64, tau: f64) -> f64 {
        if t <= self.refractory || tau < self.refractory {
            return 1.0;
        }
        let v = self.cdf(t);
        self.survival(t) * (1.0 - self.tilt(tau) * v)
    }

    pub fn fgm_conditional_hazard(&self, t: f64, tau: f64) -> f64 {
        if t <= self.refractory || tau < self.refractory {
            return 0.0;
        }
        let v = self.cdf(t);
        let a = self.tilt(tau);
        self.rate * (1.0 + a * (1.0 - 2.0 * v)) / (1.0 - a * v)
    }

    /// True conditional intensity at time `t` of the given train.
    ///
    /// On the first interval this is the marginal hazard; on `(l_{i-1}, l_i]`
    /// it is the conditional hazard at `t − l_{i-1}` given `T_{i-1}`. The open
    /// interval after the last spike is conditioned on the last interval.
    pub fn conditional_intensity(&self, t: f64, train: &SpikeTrain) -> Result<f64> {
        if !(t > 0.0 && t <= train.horizon()) {
            return Err(Error::rejected(format!(
                "time {t} outside (0, {}]",
                train.horizon()
            )));
        }
        let epochs = train.epochs();
        // index of the first epoch ≥ t: t lies in (l_{k-1}, l_k]
        let k = epochs.partition_point(|&e| e < t);
        if k == 0 {
            return Ok(self.unconditional_rate(t));
        }
        let last = epochs[k - 1];
        let prev = if k >= 2 { epochs[k - 2] } else { 0.0 };
        Ok(self.fgm_conditional_hazard(t - last, last - prev))
    }

    /// Interval-based firing rate `1/E(T)` and the instantaneous mean rate
    /// `E(1/T)`, the latter by adaptive quadrature.
    pub fn renewal_rates(&self) -> Result<(f64, f64)> {
        let firing_rate = 1.0 / (self.refractory + 1.0 / self.rate);
        if self.refractory == 0.0 {
            return Err(Error::DivergentQuantity(
                "E(1/T) diverges without a refractory period".into(),
            ));
        }
        let (lam, d) = (self.rate, self.refractory);
        let inst = quadrature::integrate(
            |t| lam * (-lam * (t - d)).exp() / t,
            d,
            d + 40.0 / lam,
            1e-10,
        );
        Ok((firing_rate, inst))
    }
}

/// Conditional hazard printed for unit rate and `α = 1`, in terms of the time
/// since the refractory period ended (`x`) and the excess of the previous
/// interval over it (`y`).
pub fn unit_fgm_hazard(x: f64, y: f64) -> f64 {
    let (ex, ey) = ((-x).exp(), (-y).exp());
    (1.0 + (1.0 - 2.0 * ex) * (1.0 - 2.0 * ey)) / (2.0 - ex - 2.0 * ey + 2.0 * (-(x + y)).exp())
}
