//! Seeded synthetic ISI generators.

use rand::Rng as _;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isi::IsiSequence;
use crate::rng;

/// `n` i.i.d. exponential intervals with the given rate.
pub fn gen_poisson(n: usize, rate: f64, seed: u64) -> Result<IsiSequence> {
    if n == 0 {
        return Err(Error::rejected("n must be at least 1"));
    }
    let exp = Exp::new(rate)
        .ok()
        .filter(|_| rate > 0.0 && rate.is_finite())
        .ok_or_else(|| Error::rejected("rate must be positive and finite"))?;
    let mut rng = rng::seeded(seed);
    let isis = (0..n)
        .map(|_| loop {
            // Exp can return exactly 0 with vanishing probability
            let x: f64 = exp.sample(&mut rng);
            if x > 0.0 {
                break x;
            }
        })
        .collect();
    IsiSequence::new(isis)
}

/// Shifted-exponential marginals coupled by a Farlie–Gumbel–Morgenstern copula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FgmExpParams {
    pub rate: f64,
    pub refractory: f64,
    pub alpha: f64,
    pub seed: u64,
}

impl FgmExpParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return Err(Error::rejected("rate must be positive"));
        }
        if !(self.refractory >= 0.0 && self.refractory.is_finite()) {
            return Err(Error::rejected("refractory period must be non-negative"));
        }
        if !(self.alpha.abs() <= 1.0) {
            return Err(Error::rejected("copula parameter alpha must lie in [-1, 1]"));
        }
        Ok(())
    }

    fn marginal_cdf(&self, t: f64) -> f64 {
        if t <= self.refractory {
            0.0
        } else {
            -(-self.rate * (t - self.refractory)).exp_m1()
        }
    }

    fn marginal_quantile(&self, v: f64) -> f64 {
        self.refractory - (-v).ln_1p() / self.rate
    }
}

/// Solves `F(t | τ) = p` for `v = F(t)` given `u = F(τ)`.
///
/// The conditional CDF `v + a v (1 - v)`, `a = α(1 - 2u)`, is a quadratic in `v`;
/// the root in `[0, 1]` is taken in its cancellation-free form.
pub(crate) fn fgm_conditional_quantile(alpha: f64, u: f64, p: f64) -> f64 {
    let a = alpha * (1.0 - 2.0 * u);
    if a.abs() <= 1e-12 {
        return p;
    }
    let b = 1.0 + a;
    let disc = (b * b - 4.0 * a * p).max(0.0);
    // (b - √disc) / 2a, rewritten as 2p / (b + √disc)
    let denom = b + disc.sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    (2.0 * p / denom).clamp(0.0, 1.0)
}

/// Markov chain of intervals: `T_1` from the marginal, then each `T_i` from the
/// FGM conditional law given `T_{i-1}`.
pub fn gen_fgm_exponential(n: usize, params: &FgmExpParams) -> Result<IsiSequence> {
    if n == 0 {
        return Err(Error::rejected("n must be at least 1"));
    }
    params.validate()?;
    let mut rng = rng::seeded(params.seed);
    let mut isis = Vec::with_capacity(n);
    let mut prev_u: Option<f64> = None;
    while isis.len() < n {
        let p: f64 = rng.random();
        let v = match prev_u {
            None => p,
            Some(u) => fgm_conditional_quantile(params.alpha, u, p),
        };
        let t = params.marginal_quantile(v);
        if !(t > params.refractory) || !t.is_finite() {
            // v == 0 puts the interval on the support boundary
            continue;
        }
        prev_u = Some(params.marginal_cdf(t));
        isis.push(t);
    }
    IsiSequence::new(isis)
}

/// Stochastic two-compartment leaky integrate-and-fire neuron.
///
/// The dendritic potential `x1` receives the noisy input; the somatic potential
/// `x2` fires at `threshold` and is reset to 0, while `x1` is never reset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoCompartmentParams {
    pub leak: f64,
    pub coupling: f64,
    pub drift: f64,
    pub noise: f64,
    pub threshold: f64,
    pub dt: f64,
    pub burn_in: usize,
    pub max_steps: u64,
    pub seed: u64,
}

impl Default for TwoCompartmentParams {
    /// First parameter set of the reference experiments.
    fn default() -> Self {
        TwoCompartmentParams {
            leak: 0.05,
            coupling: 0.5,
            drift: 4.0,
            noise: 1.0,
            threshold: 10.0,
            dt: 0.01,
            burn_in: 100,
            max_steps: 100_000_000,
            seed: 0,
        }
    }
}

/// Largest accepted `dt · (leak + 2·coupling)`.
const STABILITY_LIMIT: f64 = 0.1;

impl TwoCompartmentParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("leak", self.leak),
            ("coupling", self.coupling),
            ("noise", self.noise),
            ("threshold", self.threshold),
            ("dt", self.dt),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::rejected(format!("{name} must be positive")));
            }
        }
        if !self.drift.is_finite() {
            return Err(Error::rejected("drift must be finite"));
        }
        if self.dt * (self.leak + 2.0 * self.coupling) > STABILITY_LIMIT {
            return Err(Error::rejected(format!(
                "dt too large for stable stepping: dt·(leak + 2·coupling) must be ≤ {STABILITY_LIMIT}"
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::rejected("max_steps must be positive"));
        }
        Ok(())
    }

    /// Fixed point `(x1*, x2*)` of the noiseless dynamics without firing.
    pub fn equilibrium(&self) -> (f64, f64) {
        let (a, r) = (self.leak, self.coupling);
        let det = a * (a + 2.0 * r);
        (self.drift * (a + r) / det, self.drift * r / det)
    }
}

/// Recorded membrane potentials on the integration grid.
///
/// At a spike epoch the stored `x2` is the post-reset value 0.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub spikes: Vec<f64>,
}

struct Compartments<'p> {
    p: &'p TwoCompartmentParams,
    x1: f64,
    x2: f64,
    step: u64,
    noise_scale: f64,
}

impl<'p> Compartments<'p> {
    fn new(p: &'p TwoCompartmentParams) -> Self {
        Compartments {
            p,
            x1: 0.0,
            x2: 0.0,
            step: 0,
            noise_scale: p.noise * p.dt.sqrt(),
        }
    }

    fn time(&self) -> f64 {
        self.step as f64 * self.p.dt
    }

    /// One Euler–Maruyama step. Returns true when the soma fired (and was reset).
    fn advance(&mut self, rng: &mut rng::Rng, fire: bool) -> bool {
        let p = self.p;
        let z: f64 = StandardNormal.sample(rng);
        let dx1 = (-p.leak * self.x1 + p.coupling * (self.x2 - self.x1) + p.drift) * p.dt
            + self.noise_scale * z;
        let dx2 = (-p.leak * self.x2 + p.coupling * (self.x1 - self.x2)) * p.dt;
        self.x1 += dx1;
        self.x2 += dx2;
        self.step += 1;
        if fire && self.x2 >= p.threshold {
            self.x2 = 0.0;
            true
        } else {
            false
        }
    }
}

/// Simulates until `burn_in + n_spikes` intervals have elapsed and returns the
/// last `n_spikes` of them. The sequence origin is the last discarded spike, so
/// its epochs share the time axis of the trajectory.
pub fn gen_two_compartment(
    params: &TwoCompartmentParams,
    n_spikes: usize,
    record_trajectory: bool,
) -> Result<(IsiSequence, Option<Trajectory>)> {
    if n_spikes == 0 {
        return Err(Error::rejected("n_spikes must be at least 1"));
    }
    params.validate()?;
    let mut rng = rng::seeded(params.seed);
    let mut state = Compartments::new(params);
    let mut traj = record_trajectory.then(|| {
        let mut t = Trajectory::default();
        t.times.push(0.0);
        t.x1.push(0.0);
        t.x2.push(0.0);
        t
    });
    let total = params.burn_in + n_spikes;
    let mut spikes = Vec::with_capacity(total);
    while spikes.len() < total {
        if state.step >= params.max_steps {
            return Err(Error::NonFiringRegime {
                budget: params.max_steps,
            });
        }
        let fired = state.advance(&mut rng, true);
        let t = state.time();
        if fired {
            spikes.push(t);
        }
        if let Some(tr) = traj.as_mut() {
            tr.times.push(t);
            tr.x1.push(state.x1);
            tr.x2.push(state.x2);
            if fired {
                tr.spikes.push(t);
            }
        }
    }
    let origin = if params.burn_in == 0 {
        0.0
    } else {
        spikes[params.burn_in - 1]
    };
    let kept = &spikes[params.burn_in..];
    let mut prev = origin;
    let isis = kept
        .iter()
        .map(|&e| {
            let d = e - prev;
            prev = e;
            d
        })
        .collect();
    let seq = IsiSequence::with_origin(isis, origin)?;
    Ok((seq, traj))
}

/// Integrates the dynamics for `n_steps` with firing disabled.
pub fn simulate_subthreshold(params: &TwoCompartmentParams, n_steps: u64) -> Result<Trajectory> {
    params.validate()?;
    let mut rng = rng::seeded(params.seed);
    let mut state = Compartments::new(params);
    let mut tr = Trajectory {
        times: vec![0.0],
        x1: vec![0.0],
        x2: vec![0.0],
        spikes: Vec::new(),
    };
    for _ in 0..n_steps {
        state.advance(&mut rng, false);
        tr.times.push(state.time());
        tr.x1.push(state.x1);
        tr.x2.push(state.x2);
    }
    Ok(tr)
}
