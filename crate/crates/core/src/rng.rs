//! Seeded random streams.
//!
//! Every stochastic routine draws from ChaCha12 keyed by a `u64` seed. Independent
//! sub-streams (bootstrap replicates, Monte Carlo repetitions) use the ChaCha
//! stream counter, so results never depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub type Rng = ChaCha12Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn substream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
