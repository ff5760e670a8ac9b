//! Hierarchical seed derivation.
//!
//! Every random quantity is drawn from its own generator, keyed by a path
//! such as `[REALIZATION, r, TRAFFIC, n, k]`. Values never depend on the
//! order in which streams are consumed, so results are identical whatever
//! the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SYNTH: u64 = 0x5359;
pub const REALIZATION: u64 = 0x5245;
pub const ESTIMATE: u64 = 0x4553;
pub const PLAN: u64 = 0x504c;
pub const PRICE: u64 = 0x5052;
pub const TRAFFIC: u64 = 0x5452;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a path of labels into a child seed.
pub fn derive(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn stream(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, path))
}

/// Uniform draw on `[-half_width, +half_width]`.
pub fn symmetric<R: Rng + ?Sized>(rng: &mut R, half_width: f64) -> f64 {
    half_width * (2.0 * rng.gen::<f64>() - 1.0)
}
