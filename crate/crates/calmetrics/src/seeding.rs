//! Deterministic seed derivation for independent random streams.
//!
//! Every randomized routine in the crate takes a single `u64` seed and
//! derives per-task sub-seeds with a SplitMix64 mix, so task results are
//! identical no matter how work is scheduled across threads. ChaCha8 is used
//! as the generator everywhere: fixed algorithm, stable across platforms.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derive the seed of an independent sub-stream from a base seed.
pub(crate) fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
