//! The single seeded generator used everywhere randomness is drawn.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Name recorded in output documents next to the seed.
pub const RNG_ALGORITHM: &str = "chacha20-rand_chacha-0.3";

pub type Rng = ChaCha20Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}
