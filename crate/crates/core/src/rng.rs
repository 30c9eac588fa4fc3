//! Deterministic, platform-stable random source.
//!
//! Every stream is a ChaCha8 keystream. The 256-bit key is expanded from a
//! 64-bit seed with the SplitMix64 output function (increment
//! `0x9E3779B97F4A7C15`, multipliers `0xBF58476D1CE4E5B9` and
//! `0x94D049BB133111EB`), and the ChaCha stream id selects one of 2^64
//! independent streams under that key. Neither step depends on the platform,
//! so a `(seed, stream)` pair names the same draw sequence everywhere.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer applied to `state + GOLDEN_GAMMA`.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn expand_key(seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_exact_mut(8) {
        let word = splitmix64(state);
        state = state.wrapping_add(GOLDEN_GAMMA);
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    key
}

#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::from_seed(expand_key(seed));
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Independent stream under the same seed.
    pub fn child(&self, stream: u64) -> Self {
        Self::with_stream(self.seed, stream)
    }

    /// Stream addressed by a `(tag, round, index)` triple, used by loss
    /// generators so that round `t`, sequence `k` draws do not depend on
    /// query order.
    pub fn keyed(seed: u64, tag: u64, round: u64, index: u64) -> Self {
        let key = splitmix64(seed ^ splitmix64(tag));
        let stream = splitmix64(round).rotate_left(17) ^ index;
        Self::with_stream(key, stream)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_in(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.uniform()
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn gaussian_vec(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.standard_normal()).collect()
    }
}

/// Uniform direction on the unit sphere in `d` dimensions (normalized Gaussian).
pub fn sample_unit_sphere(rng: &mut RandomSource, d: usize) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "sphere dimension must be at least 1".into(),
        ));
    }
    loop {
        let mut u = rng.gaussian_vec(d);
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-300 {
            u.iter_mut().for_each(|v| *v /= norm);
            return Ok(u);
        }
    }
}
