//! Counter-based random number streams.
//!
//! Every random draw in the engine comes from a stream keyed by
//! `(seed, path, purpose, attempt)`. Streams are independent ChaCha8
//! generators whose 256-bit keys are derived from the key tuple with a
//! SplitMix64 chain, so any path can be regenerated in isolation and the
//! parallel schedule cannot change results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. Each purpose gets its own independent stream
/// so that, e.g., adding Brownian draws never perturbs the jump candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    /// Candidate count, times and marks of the dominating Poisson measure.
    BasePoints = 1,
    /// Brownian increments on the uniform grid.
    Brownian = 2,
    /// Brownian bridge values at candidate times.
    Bridge = 3,
}

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic stream for `(seed, path, purpose, attempt)`.
pub fn stream(seed: u64, path: u64, purpose: Purpose, attempt: u32) -> ChaCha8Rng {
    let mut state = seed ^ 0x51a0_9e66_7c3d_b1f4;
    let mut mix = |v: u64| {
        state ^= v.wrapping_mul(0x2545f4914f6cdd1d);
        splitmix64(&mut state)
    };
    let a = mix(path);
    let b = mix(purpose as u64);
    let c = mix(attempt as u64);
    let d = mix(0xdead_beef_cafe_f00d);
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&a.to_le_bytes());
    key[8..16].copy_from_slice(&b.to_le_bytes());
    key[16..24].copy_from_slice(&c.to_le_bytes());
    key[24..32].copy_from_slice(&d.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
