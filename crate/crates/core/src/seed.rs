//! Seed derivation.
//!
//! Every randomized stage takes its own 64-bit seed derived from one global
//! seed by a counter-mode split: `sub_seed(s, i) = splitmix64(s + (i+1)·φ)`
//! where φ = 0x9E3779B97F4A7C15. Stages can therefore be re-run in isolation
//! with the same randomness they saw inside a pipeline.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn sub_seed(seed: u64, counter: u64) -> u64 {
    splitmix64(seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stage counters used by the CLI pipeline.
pub mod stage {
    pub const GEN_OV: u64 = 0;
    pub const REDUCE_CP: u64 = 1;
    pub const REDUCE_EDIT: u64 = 2;
    pub const PROTOCOL: u64 = 3;
    pub const ANN: u64 = 4;
    pub const STATS: u64 = 5;
}
