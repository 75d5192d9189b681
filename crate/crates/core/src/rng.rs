//! Seedable, portable randomness for state ensembles and the roof optimizer.
//!
//! The generator is ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`).
//! Uniform doubles use the top 53 bits of a `u64` draw, and normal variates
//! come from the basic Box–Muller transform, one pair per two uniforms with
//! the cosine branch first. Nothing here depends on `rand_distr`, so a port
//! only needs ChaCha20 and these few lines to reproduce fixtures.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone)]
pub struct StateRng {
    inner: ChaCha20Rng,
    spare: Option<f64>,
}

impl StateRng {
    pub fn seeded(seed: u64) -> Self {
        Self {
            inner: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - u keeps the log argument in (0, 1].
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Complex Gaussian with independent standard-normal real and imaginary parts.
    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        Complex64::new(re, im)
    }

    pub fn complex_normal_vec(&mut self, len: usize) -> Vec<Complex64> {
        (0..len).map(|_| self.complex_normal()).collect()
    }

    /// Uniform integer in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        ((self.uniform() * bound as f64) as usize).min(bound - 1)
    }
}
