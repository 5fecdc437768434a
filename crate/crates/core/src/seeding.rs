//! Deterministic seed derivation.
//!
//! Every stochastic component in the toolkit draws from a [`ChaCha8Rng`]
//! seeded through [`mix`]. Derived streams (per fold, per tree, per sampler)
//! use `mix(base, salt)` so that parallel execution order can never change
//! results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer over `base ^ rotated salt`.
///
/// The exact constants are load-bearing: serialized artifacts (reports,
/// resampled datasets) are reproducible only while this function is stable.
pub fn mix(base: u64, salt: u64) -> u64 {
    let mut z = base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The one RNG used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
