//! Reproducible random streams.
//!
//! Every random decision in the crate draws from a [`Stream`] seeded by a
//! 64-bit value. Child seeds for parallel jobs are derived by hashing the
//! master seed together with the job's coordinates, so results never depend
//! on scheduling or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The crate-wide PRNG: ChaCha with 8 rounds, a counter-based generator.
pub type Stream = ChaCha8Rng;

/// Opens a stream from a 64-bit seed.
pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed and a path of job coordinates,
/// e.g. `derive_seed(master, &[n, p, graph_index, init_index])`.
///
/// Distinct paths (including paths of different lengths) give unrelated seeds.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut h = splitmix64(master ^ 0x51_7c_c1_b7_27_22_0a_95);
    for (depth, &coord) in path.iter().enumerate() {
        h = splitmix64(h ^ splitmix64(coord.wrapping_add(depth as u64 + 1)));
    }
    splitmix64(h ^ path.len() as u64)
}
