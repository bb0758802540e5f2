//! Seeded randomness.
//!
//! Every random draw in the crate (splits, bootstrap resamples, feature
//! subsets, solver tie-breaking) comes from a [`ChaCha8Rng`] seeded through
//! [`seeded`]. ChaCha8 output is fully specified and independent of the
//! host's endianness or word size, so a seed reproduces the same stream on
//! every platform.
//!
//! Child seeds are derived with [`mix`], a SplitMix64 finalizer applied to
//! `parent + (stream + 1) * 0x9E3779B97F4A7C15`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child seed for `stream` from `parent`.
pub fn mix(parent: u64, stream: u64) -> u64 {
    let mut z = parent.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
