use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::mdp::StateId;

/// Simulated world: true safety values and a seeded Gaussian noise stream.
///
/// Every measurement draws from the same stream, so a run is reproducible
/// given the seed and the sequence of measured states.
#[derive(Clone, Debug)]
pub struct Environment {
    true_safety: Vec<f64>,
    heights: Option<Vec<f64>>,
    h: f64,
    noise_std: f64,
    seed: u64,
    noise: Normal<f64>,
    rng: ChaCha8Rng,
}

impl Environment {
    pub fn new(true_safety: Vec<f64>, h: f64, noise_std: f64, seed: u64) -> Result<Self> {
        if !(noise_std >= 0.0 && noise_std.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise std must be non-negative, got {noise_std}")));
        }
        if !h.is_finite() {
            return Err(Error::InvalidParameter(format!("threshold must be finite, got {h}")));
        }
        let noise = Normal::new(0.0, noise_std).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok(Self { true_safety, heights: None, h, noise_std, seed, noise, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    /// Attaches per-cell heights that can be measured with [`Environment::measure_height`].
    pub fn with_heights(mut self, heights: Vec<f64>) -> Self {
        self.heights = Some(heights);
        self
    }

    pub fn num_states(&self) -> usize {
        self.true_safety.len()
    }

    pub fn true_safety(&self) -> &[f64] {
        &self.true_safety
    }

    pub fn heights(&self) -> Option<&[f64]> {
        self.heights.as_deref()
    }

    pub fn threshold(&self) -> f64 {
        self.h
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_std
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_safe(&self, s: StateId) -> bool {
        self.true_safety[s.0] >= self.h
    }

    /// Noisy safety value `r(s) + ω`.
    pub fn measure(&mut self, s: StateId) -> f64 {
        self.true_safety[s.0] + self.noise.sample(&mut self.rng)
    }

    /// Noisy height of a terrain cell. Panics if no heights are attached.
    pub fn measure_height(&mut self, cell: usize) -> f64 {
        let heights = self.heights.as_ref().expect("environment has no heights attached");
        heights[cell] + self.noise.sample(&mut self.rng)
    }
}
