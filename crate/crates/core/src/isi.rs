//! Spike trains, interspike-interval sequences and the classical rate estimators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered spike epochs `l_1 < l_2 < ...` observed on `[0, L]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeTrain {
    epochs: Vec<f64>,
    horizon: f64,
}

fn check_epochs(epochs: &[f64], origin: f64) -> Result<()> {
    let mut prev = origin;
    for (i, &e) in epochs.iter().enumerate() {
        if !e.is_finite() {
            return Err(Error::rejected_at("non-finite spike epoch", i));
        }
        if e == prev {
            return Err(Error::rejected_at(
                "duplicate spike epoch (at most one spike per instant)",
                i,
            ));
        }
        if e < prev {
            let reason = if i == 0 {
                "spike epoch precedes the origin"
            } else {
                "spike epochs are not increasing"
            };
            return Err(Error::rejected_at(reason, i));
        }
        prev = e;
    }
    Ok(())
}

impl SpikeTrain {
    pub fn new(epochs: Vec<f64>, horizon: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::rejected("horizon must be positive and finite"));
        }
        check_epochs(&epochs, 0.0)?;
        if let Some(&last) = epochs.last() {
            if last > horizon {
                return Err(Error::rejected_at(
                    "spike epoch beyond the observation horizon",
                    epochs.len() - 1,
                ));
            }
        }
        Ok(SpikeTrain { epochs, horizon })
    }

    /// Train whose horizon is its last epoch.
    pub fn ending_at_last_spike(epochs: Vec<f64>) -> Result<Self> {
        let horizon = epochs
            .last()
            .copied()
            .ok_or(Error::InsufficientData { needed: 1, got: 0 })?;
        Self::new(epochs, horizon)
    }

    pub fn epochs(&self) -> &[f64] {
        &self.epochs
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    pub fn counting(&self) -> CountingView<'_> {
        CountingView { train: self }
    }

    pub fn to_isis(&self) -> IsiSequence {
        IsiSequence::from_valid_epochs(self.epochs.clone(), 0.0)
    }
}

/// Interspike intervals `T_i = l_i - l_{i-1}` with `l_0 = origin`.
///
/// The epochs are kept alongside the intervals so that converting back to a
/// spike train reproduces the original epochs bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsiSequence {
    isis: Vec<f64>,
    epochs: Vec<f64>,
    origin: f64,
}

impl IsiSequence {
    /// Builds the sequence from raw intervals, origin 0.
    pub fn new(isis: Vec<f64>) -> Result<Self> {
        Self::with_origin(isis, 0.0)
    }

    pub fn with_origin(isis: Vec<f64>, origin: f64) -> Result<Self> {
        if !origin.is_finite() || origin < 0.0 {
            return Err(Error::rejected("origin must be finite and non-negative"));
        }
        let mut epochs = Vec::with_capacity(isis.len());
        let mut t = origin;
        for (i, &d) in isis.iter().enumerate() {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::rejected_at("interspike intervals must be positive", i));
            }
            t += d;
            epochs.push(t);
        }
        Ok(IsiSequence {
            isis,
            epochs,
            origin,
        })
    }

    fn from_valid_epochs(epochs: Vec<f64>, origin: f64) -> Self {
        let mut prev = origin;
        let isis = epochs
            .iter()
            .map(|&e| {
                let d = e - prev;
                prev = e;
                d
            })
            .collect();
        IsiSequence {
            isis,
            epochs,
            origin,
        }
    }

    pub fn isis(&self) -> &[f64] {
        &self.isis
    }

    pub fn epochs(&self) -> &[f64] {
        &self.epochs
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.isis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.isis.is_empty()
    }

    /// Spike train on `[0, last epoch]` with `l_0 = 0`. For a zero origin the
    /// stored epochs are returned unchanged; otherwise they are shifted by the origin.
    pub fn to_spike_train(&self) -> Result<SpikeTrain> {
        if self.origin == 0.0 {
            SpikeTrain::ending_at_last_spike(self.epochs.clone())
        } else {
            SpikeTrain::ending_at_last_spike(self.epochs.iter().map(|e| e - self.origin).collect())
        }
    }

    /// Inverse of the average interval, `n / Σ T_i`.
    pub fn mean_rate(&self) -> Result<f64> {
        self.require_nonempty()?;
        Ok(self.len() as f64 / self.isis.iter().sum::<f64>())
    }

    /// Average of the reciprocal intervals, `(1/n) Σ 1/T_i`.
    pub fn instantaneous_mean_rate(&self) -> Result<f64> {
        self.require_nonempty()?;
        Ok(self.isis.iter().map(|t| t.recip()).sum::<f64>() / self.len() as f64)
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.isis.is_empty() {
            Err(Error::InsufficientData { needed: 1, got: 0 })
        } else {
            Ok(())
        }
    }
}

/// Differences the epochs into intervals with `l_0 = 0`.
pub fn from_spike_times(epochs: &[f64], horizon: f64) -> Result<IsiSequence> {
    let train = SpikeTrain::new(epochs.to_vec(), horizon)?;
    Ok(train.to_isis())
}

/// The counting process `N(t)` of a spike train.
#[derive(Debug, Clone, Copy)]
pub struct CountingView<'a> {
    train: &'a SpikeTrain,
}

impl CountingView<'_> {
    /// Number of spikes in `(0, t]`. A spike at exactly `t` is counted.
    pub fn count_at(&self, t: f64) -> Result<usize> {
        if !(0.0..=self.train.horizon).contains(&t) {
            return Err(Error::rejected(format!(
                "time {t} outside [0, {}]",
                self.train.horizon
            )));
        }
        Ok(self.train.epochs.partition_point(|&e| e <= t))
    }

    /// `N(t) / t`.
    pub fn count_rate(&self, t: f64) -> Result<f64> {
        if t <= 0.0 || t.is_nan() {
            return Err(Error::rejected("count rate needs t > 0"));
        }
        Ok(self.count_at(t)? as f64 / t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn differencing() {
        let s = from_spike_times(&[1.0, 2.5, 3.0], 4.0).unwrap();
        assert_eq!(s.isis(), &[1.0, 1.5, 0.5]);
        let s = from_spike_times(&[0.5], 1.0).unwrap();
        assert_eq!(s.isis(), &[0.5]);
    }

    #[test]
    fn duplicate_epoch_is_rejected_at_its_index() {
        let err = from_spike_times(&[1.0, 1.0, 2.0], 4.0).unwrap_err();
        assert!(matches!(err, Error::RejectedInput { index: Some(1), .. }));
        let err = from_spike_times(&[1.0, 3.0, 2.0], 4.0).unwrap_err();
        assert!(matches!(err, Error::RejectedInput { index: Some(2), .. }));
        let err = from_spike_times(&[1.0, 5.0], 4.0).unwrap_err();
        assert!(matches!(err, Error::RejectedInput { index: Some(1), .. }));
    }

    #[test]
    fn counting_boundaries() {
        let train = SpikeTrain::new(vec![1.0, 2.5, 3.0], 3.0).unwrap();
        let n = train.counting();
        assert_eq!(n.count_at(2.5).unwrap(), 2);
        assert_eq!(n.count_at(0.0).unwrap(), 0);
        assert_eq!(n.count_at(2.9).unwrap(), 2);
        assert!(n.count_at(-0.1).is_err());
        assert!(n.count_at(3.1).is_err());
    }

    #[test]
    fn count_rate_values() {
        let train = SpikeTrain::new(vec![1.0, 2.0, 3.0, 4.0], 4.0).unwrap();
        assert_eq!(train.counting().count_rate(4.0).unwrap(), 1.0);
        assert!(train.counting().count_rate(0.0).is_err());
    }

    #[test]
    fn classical_rates() {
        let s = IsiSequence::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(s.mean_rate().unwrap(), 1.0);
        let s = IsiSequence::new(vec![0.5, 1.5]).unwrap();
        assert_eq!(s.mean_rate().unwrap(), 1.0);
        let s = IsiSequence::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(s.instantaneous_mean_rate().unwrap(), 1.0);
        let s = IsiSequence::new(vec![0.5, 2.0]).unwrap();
        assert_relative_eq!(s.instantaneous_mean_rate().unwrap(), 1.25);
        let empty = IsiSequence::new(vec![]).unwrap();
        assert_eq!(
            empty.mean_rate(),
            Err(Error::InsufficientData { needed: 1, got: 0 })
        );
        assert!(empty.instantaneous_mean_rate().is_err());
    }

    #[test]
    fn non_positive_interval_rejected() {
        assert!(IsiSequence::new(vec![1.0, 0.0]).is_err());
        assert!(IsiSequence::new(vec![1.0, -2.0]).is_err());
    }

    fn epochs_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(1e-6f64..10.0, 1..60).prop_map(|gaps| {
            let mut t = 0.0;
            gaps.into_iter()
                .map(|g| {
                    t += g;
                    t
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(epochs in epochs_strategy()) {
            let horizon = *epochs.last().unwrap();
            let isi = from_spike_times(&epochs, horizon).unwrap();
            let back = isi.to_spike_train().unwrap();
            prop_assert_eq!(back.epochs(), &epochs[..]);
        }

        #[test]
        fn repeated_epoch_always_fails(epochs in epochs_strategy(), pick in any::<prop::sample::Index>()) {
            let mut e = epochs;
            let i = pick.index(e.len());
            e.insert(i, e[i]);
            let horizon = *e.last().unwrap();
            prop_assert!(from_spike_times(&e, horizon).is_err());
        }

        #[test]
        fn jensen(isis in prop::collection::vec(1e-3f64..100.0, 1..50)) {
            let s = IsiSequence::new(isis).unwrap();
            let m = s.mean_rate().unwrap();
            let im = s.instantaneous_mean_rate().unwrap();
            prop_assert!(im >= m * (1.0 - 1e-12));
        }
    }
}
