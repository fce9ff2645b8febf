//! Portable, seedable normal variates.
//!
//! The generator is ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64(seed)`)
//! with one stream per innovation series (`set_stream(k)`). Uniforms are the top
//! 53 bits of `next_u64()` scaled into (0, 1]; normals use the basic
//! Box–Muller transform, consuming two uniforms and emitting two variates
//! (cosine branch first). Any ChaCha20 implementation with the same seeding
//! scheme reproduces these draws exactly.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Stream index for cost-push innovations.
pub const STREAM_COST_PUSH: u64 = 0;
/// Stream index for natural-rate (demand) innovations.
pub const STREAM_DEMAND: u64 = 1;
/// Stream index for survey measurement noise.
pub const STREAM_SURVEY: u64 = 2;

pub struct NormalStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    /// Uniform on (0, 1].
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn fill_standard_normal(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.standard_normal()).collect()
    }
}
