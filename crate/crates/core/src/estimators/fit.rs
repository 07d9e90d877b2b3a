use serde::Serialize;

use super::config::EstimatorConfig;
use super::kernel::{window, MixtureCurve, CUTOFF};
use crate::error::{Error, Result};
use crate::isi::IsiSequence;
use crate::special::normal_pdf;

/// Conditioning terms whose weight falls below `e^-40` of the strongest one are dropped.
const REL_WEIGHT_LOG_CUTOFF: f64 = 40.0;

/// Kernel estimators fitted to one interval sample.
///
/// The joint density runs over the `n − 1` adjacent pairs `(T_i, T_{i+1})`
/// and is normalized by `n − 1`; the marginal runs over all `n` intervals.
#[derive(Debug, Clone)]
pub struct FittedEstimator {
    sample: IsiSequence,
    config: EstimatorConfig,
    domain_cap: f64,
    sorted: Vec<f64>,
    /// (T_i, T_{i+1}) sorted by T_i.
    pairs: Vec<(f64, f64)>,
    marginal: MixtureCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitSummary {
    pub n: usize,
    pub bandwidth: f64,
    pub smoothing_scale: f64,
    pub domain_cap: f64,
}

/// Linear-interpolation sample quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn fit(sample: &IsiSequence, config: &EstimatorConfig) -> Result<FittedEstimator> {
    FittedEstimator::new(sample.clone(), *config)
}

impl FittedEstimator {
    pub fn new(sample: IsiSequence, config: EstimatorConfig) -> Result<Self> {
        config.validate()?;
        let n = sample.len();
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: n });
        }
        let mut sorted = sample.isis().to_vec();
        sorted.sort_by(f64::total_cmp);
        let domain_cap = config
            .domain_cap
            .unwrap_or_else(|| quantile_sorted(&sorted, 0.99));
        let mut pairs: Vec<(f64, f64)> = sample.isis().windows(2).map(|w| (w[0], w[1])).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let h = config.kernel_scale * config.bandwidth(n);
        let mut marginal = MixtureCurve::new(
            sorted.iter().map(|&x| (x, 1.0)).collect(),
            1.0 / n as f64,
            h,
            config.eval_step,
        );
        marginal.extend_to(domain_cap);
        Ok(FittedEstimator {
            sample,
            config,
            domain_cap,
            sorted,
            pairs,
            marginal,
        })
    }

    pub fn sample(&self) -> &IsiSequence {
        &self.sample
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.sample.len()
    }

    /// Adjacent pairs `(T_i, T_{i+1})` in sample order.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.sample.isis().windows(2).map(|w| (w[0], w[1]))
    }

    /// `c_n = n^(-β)`.
    pub fn bandwidth(&self) -> f64 {
        self.config.bandwidth(self.n())
    }

    /// Standard deviation of each kernel bump, `s · c_n`.
    pub fn smoothing_scale(&self) -> f64 {
        self.config.kernel_scale * self.bandwidth()
    }

    pub fn domain_cap(&self) -> f64 {
        self.domain_cap
    }

    pub fn summary(&self) -> FitSummary {
        FitSummary {
            n: self.n(),
            bandwidth: self.bandwidth(),
            smoothing_scale: self.smoothing_scale(),
            domain_cap: self.domain_cap,
        }
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(0.0..=self.domain_cap).contains(&t) {
            return Err(Error::rejected(format!(
                "t = {t} outside the estimation window [0, {}]",
                self.domain_cap
            )));
        }
        Ok(())
    }

    fn check_tau(tau: f64) -> Result<()> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::rejected(format!("conditioning interval {tau} must be ≥ 0")));
        }
        Ok(())
    }

    /// `f̂(t) = (1/(n c_n)) Σ K_1((t − T_i)/c_n)`.
    pub fn marginal_density(&self, t: f64) -> f64 {
        self.marginal.density(t)
    }

    /// `f̂(τ, t) = (1/((n−1) c_n²)) Σ K_1((τ − T_i)/c_n) K_2((t − T_{i+1})/c_n)`.
    pub fn joint_density(&self, tau: f64, t: f64) -> f64 {
        let h = self.smoothing_scale();
        let (lo, hi) = window(&self.pairs, |p| p.0, tau, CUTOFF * h);
        let s: f64 = self.pairs[lo..hi]
            .iter()
            .map(|&(a, b)| normal_pdf((tau - a) / h) * normal_pdf((t - b) / h))
            .sum();
        s / ((self.n() - 1) as f64 * h * h)
    }

    /// `f̂(t | τ) = f̂(τ, t) / f̂(τ)`, computed with kernel weights taken
    /// relative to the observation nearest `τ` so the ratio never underflows.
    pub fn conditional_density(&self, tau: f64, t: f64) -> f64 {
        self.conditional_curve(tau).density(t)
    }

    fn conditional_curve(&self, tau: f64) -> MixtureCurve {
        let h = self.smoothing_scale();
        let n = self.n();
        let i = self.sorted.partition_point(|&x| x < tau);
        let nearest = [i.checked_sub(1), (i < n).then_some(i)]
            .into_iter()
            .flatten()
            .map(|j| (tau - self.sorted[j]).abs())
            .fold(f64::INFINITY, f64::min);
        let z_min_sq = (nearest / h).powi(2);
        let radius = h * (z_min_sq + 2.0 * REL_WEIGHT_LOG_CUTOFF).sqrt();
        let weight = |x: f64| {
            let z = (tau - x) / h;
            (-0.5 * (z * z - z_min_sq)).exp()
        };
        let (lo, hi) = window(&self.sorted, |&x| x, tau, radius);
        let denom: f64 = self.sorted[lo..hi].iter().map(|&x| weight(x)).sum();
        let (lo, hi) = window(&self.pairs, |p| p.0, tau, radius);
        let terms: Vec<(f64, f64)> = self.pairs[lo..hi]
            .iter()
            .map(|&(a, b)| (b, weight(a)))
            .collect();
        let factor = n as f64 / ((n - 1) as f64 * denom);
        MixtureCurve::new(terms, factor, h, self.config.eval_step)
    }

    /// Conditional estimators at a fixed `τ`, tabulated over `[0, M]`.
    pub fn conditional_slice(&self, tau: f64) -> Result<ConditionalSlice> {
        Self::check_tau(tau)?;
        Ok(self.conditional_slice_to(tau, self.domain_cap, Some(self.domain_cap)))
    }

    /// Slice tabulated to `extent` with an optional query window.
    pub(crate) fn conditional_slice_to(
        &self,
        tau: f64,
        extent: f64,
        cap: Option<f64>,
    ) -> ConditionalSlice {
        let mut curve = self.conditional_curve(tau);
        curve.extend_to(extent);
        ConditionalSlice {
            tau,
            curve,
            floor: self.config.survival_floor,
            cap,
        }
    }

    /// `Ŝ(t) = 1 − ∫₀ᵗ f̂`, trapezoidal, floored at the survival floor.
    pub fn survival(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(floor_survival(1.0 - self.marginal.integral_to(t), self.config.survival_floor))
    }

    /// `ĥ(t) = f̂(t) / Ŝ(t)`.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        let s = self.survival(t)?;
        Ok(self.marginal.density_at(t) / s)
    }

    pub fn conditional_survival(&self, tau: f64, t: f64) -> Result<f64> {
        self.check_t(t)?;
        self.conditional_slice(tau)?.survival(t)
    }

    /// `ĥ(t | τ) = f̂(t | τ) / Ŝ(t | τ)`.
    pub fn conditional_hazard(&self, tau: f64, t: f64) -> Result<f64> {
        self.check_t(t)?;
        self.conditional_slice(tau)?.hazard(t)
    }
}

fn floor_survival(s: f64, floor: f64) -> f64 {
    s.clamp(floor, 1.0)
}

/// Conditional density, survival and hazard for one conditioning value.
#[derive(Debug, Clone)]
pub struct ConditionalSlice {
    tau: f64,
    curve: MixtureCurve,
    floor: f64,
    cap: Option<f64>,
}

impl ConditionalSlice {
    pub fn tau(&self) -> f64 {
        self.tau
    }

    fn check(&self, t: f64) -> Result<()> {
        let upper = self.cap.unwrap_or(f64::INFINITY);
        if !(t >= 0.0 && t <= upper && self.curve.covers(t)) {
            return Err(Error::rejected(format!(
                "t = {t} outside the tabulated window [0, {upper}]"
            )));
        }
        Ok(())
    }

    pub fn density(&self, t: f64) -> f64 {
        self.curve.density_at(t)
    }

    pub fn survival(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.survival_unchecked(t))
    }

    pub fn hazard(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.hazard_unchecked(t))
    }

    pub(crate) fn survival_unchecked(&self, t: f64) -> f64 {
        floor_survival(1.0 - self.curve.integral_to(t), self.floor)
    }

    pub(crate) fn hazard_unchecked(&self, t: f64) -> f64 {
        self.curve.density_at(t) / self.survival_unchecked(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> EstimatorConfig {
        EstimatorConfig {
            domain_cap: Some(5.0),
            ..Default::default()
        }
    }

    #[test]
    fn fit_preconditions() {
        let one = IsiSequence::new(vec![1.0]).unwrap();
        assert_eq!(
            fit(&one, &cfg()).unwrap_err(),
            Error::InsufficientData { needed: 2, got: 1 }
        );
        let two = IsiSequence::new(vec![1.0, 2.0]).unwrap();
        let f = fit(&two, &cfg()).unwrap();
        assert_eq!(f.pairs().collect::<Vec<_>>(), vec![(1.0, 2.0)]);
        let bad = EstimatorConfig {
            bandwidth_exponent: 0.3,
            ..cfg()
        };
        match fit(&two, &bad).unwrap_err() {
            Error::RejectedInput { reason, .. } => assert!(reason.contains("bandwidth_exponent")),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn joint_peak_for_one_pair() {
        let two = IsiSequence::new(vec![1.0, 2.0]).unwrap();
        let f = fit(&two, &cfg()).unwrap();
        let c = 2f64.powf(-0.2);
        let k0 = super::super::kernel::gaussian_kernel(0.0, 0.2, 1.0);
        assert_relative_eq!(f.joint_density(1.0, 2.0), k0 * k0 / (c * c), max_relative = 1e-12);
    }

    #[test]
    fn conditional_is_joint_over_marginal() {
        let s = IsiSequence::new(vec![1.0, 1.3, 0.9, 1.7, 1.1, 1.25, 0.8, 1.4]).unwrap();
        let f = fit(&s, &cfg()).unwrap();
        for tau in [0.85, 1.0, 1.2, 1.6] {
            for t in [0.9, 1.1, 1.3, 1.5] {
                let direct = f.joint_density(tau, t) / f.marginal_density(tau);
                assert_relative_eq!(f.conditional_density(tau, t), direct, max_relative = 1e-10);
            }
        }
        // far from every observation the marginal underflows but the ratio does not
        let far = f.conditional_density(40.0, 1.4);
        assert!(far.is_finite() && far > 0.0);
    }

    #[test]
    fn survival_window_and_start() {
        let s = IsiSequence::new(vec![1.0, 1.3, 0.9, 1.7, 1.1]).unwrap();
        let f = fit(&s, &cfg()).unwrap();
        assert_eq!(f.survival(0.0).unwrap(), 1.0);
        assert_eq!(f.conditional_survival(1.0, 0.0).unwrap(), 1.0);
        assert!(f.survival(5.01).is_err());
        assert!(f.hazard(-0.1).is_err());
        assert!(f.conditional_hazard(-1.0, 1.0).is_err());
        let mut prev = 1.0;
        for k in 0..=500 {
            let v = f.survival(k as f64 * 0.01).unwrap();
            assert!(v <= prev && v >= f.config().survival_floor);
            prev = v;
        }
    }

    #[test]
    fn default_cap_is_99th_percentile() {
        let isis: Vec<f64> = (1..=101).map(|k| k as f64).collect();
        let f = fit(&IsiSequence::new(isis).unwrap(), &EstimatorConfig::default()).unwrap();
        assert_relative_eq!(f.domain_cap(), 100.0, epsilon = 1e-12);
    }
}
