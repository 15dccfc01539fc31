//! Seeded random number generation shared by lifting, random permutations
//! and sampled experiments.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name of the generator algorithm, recorded in experiment output.
pub const PRNG_ALGORITHM: &str = "ChaCha8";

pub type Prng = ChaCha8Rng;

/// Generator for a single seeded call.
pub fn seeded(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for sample `index` under a master seed.
///
/// Uses a separate ChaCha stream per index, so streams never overlap and
/// the result does not depend on the order samples are evaluated in.
pub fn split(master: u64, index: u64) -> Prng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Derived 64-bit seed for sample `index`, for records that store a seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    use rand::RngCore;
    split(master, index).next_u64()
}
