//! Seeding rules shared by every stochastic component.
//!
//! All randomness comes from [`ChaCha8Rng`], whose output stream is fixed by
//! its specification and therefore identical on every platform. Independent
//! streams are derived from a base seed with [`split_seed`]:
//!
//! ```text
//! split_seed(base, stream) = splitmix64(base XOR stream)
//! ```
//!
//! The benchmark uses `stream = trial index` for per-trial signals and
//! `stream = SENSING_STREAM | m` for the sensing matrix at `m` rows.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tag bit marking sensing-matrix streams so they never collide with trial streams.
pub const SENSING_STREAM: u64 = 1 << 63;

/// Creates the crate-wide generator for `seed`.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One round of the SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn split_seed(base: u64, stream: u64) -> u64 {
    splitmix64(base ^ stream)
}
