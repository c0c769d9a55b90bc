//! Deterministic stream derivation for reproducible experiments.
//!
//! Every random quantity in the simulator draws from a ChaCha8 stream whose
//! seed is derived from a root seed plus a path of integer tags. Derivation
//! uses the SplitMix64 finalizer, so streams for different paths are
//! statistically independent and a given path always yields the same stream
//! regardless of evaluation order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer: a bijective avalanche mix on 64 bits.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a root seed and a tag path.
///
/// Each tag is absorbed in order; absorbing is not commutative, so
/// `derive_seed(s, &[1, 2]) != derive_seed(s, &[2, 1])`.
pub fn derive_seed(root: u64, tags: &[u64]) -> u64 {
    let mut state = mix64(root ^ GAMMA);
    for &tag in tags {
        state = mix64(state ^ tag.wrapping_mul(GAMMA));
    }
    state
}

/// Expands a 64-bit seed into a ChaCha8 generator.
pub fn stream_rng(seed: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut word = seed;
    for chunk in key.chunks_exact_mut(8) {
        word = mix64(word.wrapping_add(GAMMA));
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Stream for kernel entry (i, j); symmetric entries share a stream only if
/// requested with ordered indices by the caller.
pub fn entry_rng(seed: u64, i: usize, j: usize) -> ChaCha8Rng {
    stream_rng(derive_seed(seed, &[i as u64, j as u64]))
}

/// Uniform draw in [0, 1) with 53 bits of precision.
pub fn uniform_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One pair of independent standard normal deviates (Box-Muller).
pub fn standard_normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    #[cfg_attr(test, allow(unused_imports))]
    use num_traits::Float;
    let mut u1 = uniform_f64(rng);
    while u1 == 0.0 {
        u1 = uniform_f64(rng);
    }
    let u2 = uniform_f64(rng);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * core::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}
