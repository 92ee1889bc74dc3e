//! Fixed inputs for the benchmarks, seeded so runs are comparable.

use dmod_core::quiver::{DiskQuad, MonodromyPair};
use dmod_core::sample::{random_formal_type, random_pair, random_quad};
use dmod_core::{int, FormalType, TruncatedPuiseuxSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed;

/// `z^{-k}` for the oracle benchmarks.
pub fn exponential(k: i64) -> TruncatedPuiseuxSeries {
    TruncatedPuiseuxSeries::monomial(int(1), int(-k))
}

pub fn pairs(n: usize, count: usize) -> Vec<MonodromyPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| random_pair(&mut rng, n)).collect()
}

pub fn quads(n: usize, m: usize, count: usize) -> Vec<DiskQuad> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| random_quad(&mut rng, n, m)).collect()
}

/// Regular genus-zero types of rank `n` with `k` points.
pub fn formal_types(n: u64, k: usize, count: usize) -> Vec<FormalType> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| random_formal_type(&mut rng, n, k, true)).collect()
}
