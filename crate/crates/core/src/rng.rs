//! Seeded random streams. Every consumer gets its own ChaCha stream derived
//! from the master seed, so results do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const REQUIREMENT_STREAM: u64 = 0;

/// Stream for Monte Carlo trial `trial`.
pub fn trial_rng(master_seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

/// Stream for drawing the requirement sample set; disjoint from every trial stream.
pub fn requirement_rng(master_seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(REQUIREMENT_STREAM);
    rng
}
