//! Conditional firing-rate estimation for spike trains whose interspike
//! intervals form a first-order Markov chain.
//!
//! The crate covers the whole chain of work: classical rate statistics,
//! synthetic generators with known ground truth, the kernel estimator of the
//! conditional hazard and the resulting conditional intensity, and the
//! time-rescaling validation tests.

pub mod error;
pub mod estimators;
pub mod generators;
pub mod isi;
pub mod oracles;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod validation;

pub use error::{Error, Result};
pub use isi::{from_spike_times, CountingView, IsiSequence, SpikeTrain};
