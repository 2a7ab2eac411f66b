//! Seeded randomness.
//!
//! Every stream is a [`ChaCha8Rng`] seeded from a `u64`. Sub-streams are
//! derived by hashing a master seed with a purpose string or a task index
//! through SplitMix64, so adding a new consumer never shifts the draws seen
//! by an existing one. Runs are reproducible across processes on the same
//! build; bit-equality with other languages is not a goal.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Seed for the sub-stream named `purpose`.
pub fn derive_seed(seed: u64, purpose: &str) -> u64 {
    splitmix64(splitmix64(seed) ^ fnv1a(purpose))
}

/// Seed for the `index`-th task of a sweep.
pub fn derive_seed_index(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed).wrapping_add(splitmix64(index ^ 0x5851_F42D_4C95_7F2D)))
}
