//! Seeded generator construction.
//!
//! Every randomized operation takes an explicit generator. Independent tasks
//! (utterances, trials, training jobs) get their own stream derived from a
//! master seed so results do not depend on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for a master seed.
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for stream `index` under `seed`. Distinct indices give
/// non-overlapping ChaCha streams.
pub fn stream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
