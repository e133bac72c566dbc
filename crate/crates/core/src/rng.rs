//! Seed derivation. Every random stream in the crate is a ChaCha8 generator
//! keyed by a derived seed and, where a counter is natural, a stream id.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags. Keeping them distinct keeps IC samples, rule samplers, walks
/// and the GA statistically independent under one user seed.
pub mod tag {
    pub const ICS: u64 = 0x1C5;
    pub const DOS: u64 = 0xD05;
    pub const METROPOLIS: u64 = 0x3E7;
    pub const WALK: u64 = 0x3A1C;
    pub const OLYMPUS: u64 = 0x0111;
    pub const GA: u64 = 0x6A;
    pub const GA_ICS: u64 = 0x6A1C;
}

// splitmix64 finalizer
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `seed`, a stream tag and an index.
pub fn derive(seed: u64, tag: u64, index: u64) -> u64 {
    mix(mix(seed ^ mix(tag)) ^ index)
}

pub fn rng(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, tag, index))
}
