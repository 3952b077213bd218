use std::fmt;
use std::sync::Arc;

use super::covariance::{Covariance, StationaryCovariance};
use super::Kernel;
use crate::error::{Error, Result};
use crate::mdp::Metric;

/// Number of incremental appends after which the factor is rebuilt from
/// scratch to bound round-off drift.
pub const REBUILD_INTERVAL: usize = 64;

/// Diagonal jitter levels tried, in order, when factorization fails.
pub const JITTER_LADDER: [f64; 6] = [0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6];

/// Pivots below this fraction of the corresponding diagonal entry count as
/// a failed factorization.
const PIVOT_TOLERANCE: f64 = 1e-13;

/// Lower Cholesky factor of `K + (σ² + jitter) I`, stored row by row.
#[derive(Clone, Debug, Default)]
struct Factor {
    packed: Vec<f64>,
    /// `L⁻¹ y`
    alpha: Vec<f64>,
    jitter: f64,
    appends: usize,
    generation: u64,
}

impl Factor {
    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        let start = i * (i + 1) / 2;
        &self.packed[start..start + i + 1]
    }

    /// Solves `L x = b` for the leading `b.len()` rows.
    fn forward(&self, b: &[f64]) -> Vec<f64> {
        let mut x = Vec::with_capacity(b.len());
        for (i, &bi) in b.iter().enumerate() {
            let row = self.row(i);
            let dot: f64 = row[..i].iter().zip(&x).map(|(l, v)| l * v).sum();
            x.push((bi - dot) / row[i]);
        }
        x
    }
}

/// Exact GP posterior over indexed points with a cached Cholesky factor.
///
/// The factor grows by one row per observation and is rebuilt from scratch
/// every [`REBUILD_INTERVAL`] appends. When a pivot collapses, the whole
/// system is refactored with escalating diagonal jitter.
#[derive(Clone)]
pub struct GpModel {
    covariance: Arc<dyn Covariance>,
    noise_var: f64,
    inputs: Vec<usize>,
    observations: Vec<f64>,
    factor: Factor,
}

impl GpModel {
    pub fn new(covariance: Arc<dyn Covariance>, noise_std: f64) -> Result<Self> {
        if !(noise_std >= 0.0 && noise_std.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise std must be non-negative, got {noise_std}")));
        }
        Ok(Self {
            covariance,
            noise_var: noise_std * noise_std,
            inputs: Vec::new(),
            observations: Vec::new(),
            factor: Factor::default(),
        })
    }

    /// Model with a stationary kernel over the given metric.
    pub fn stationary(kernel: Kernel, metric: Metric, noise_std: f64) -> Result<Self> {
        Self::new(Arc::new(StationaryCovariance::new(kernel, metric)), noise_std)
    }

    /// Builds a model from a whole dataset with a single factorization.
    pub fn with_data(
        covariance: Arc<dyn Covariance>,
        noise_std: f64,
        inputs: Vec<usize>,
        observations: Vec<f64>,
    ) -> Result<Self> {
        if inputs.len() != observations.len() {
            return Err(Error::DimensionMismatch { expected: inputs.len(), found: observations.len() });
        }
        let mut model = Self::new(covariance, noise_std)?;
        model.inputs = inputs;
        model.observations = observations;
        model.refactor(0.0)?;
        Ok(model)
    }

    pub fn covariance(&self) -> &Arc<dyn Covariance> {
        &self.covariance
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_var.sqrt()
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    /// Diagonal jitter currently folded into the factor.
    pub fn jitter(&self) -> f64 {
        self.factor.jitter
    }

    /// Incremented every time the factor is rebuilt from scratch.
    pub fn generation(&self) -> u64 {
        self.factor.generation
    }

    pub(crate) fn factor_row(&self, i: usize) -> &[f64] {
        self.factor.row(i)
    }

    pub(crate) fn alpha(&self) -> &[f64] {
        &self.factor.alpha
    }

    /// `L⁻¹ k_t(q)`: the projection of a query point onto the data.
    pub(crate) fn project(&self, q: usize) -> Vec<f64> {
        let k: Vec<f64> = self.inputs.iter().map(|&x| self.covariance.cov(x, q)).collect();
        self.factor.forward(&k)
    }

    /// Returns a copy of the model with one more observation.
    pub fn add_observation(&self, point: usize, value: f64) -> Result<Self> {
        let mut next = self.clone();
        next.observe(point, value)?;
        Ok(next)
    }

    /// Adds an observation in place.
    pub fn observe(&mut self, point: usize, value: f64) -> Result<()> {
        let l = self.project(point);
        let diag = self.covariance.variance(point) + self.noise_var + self.factor.jitter;
        let pivot = diag - l.iter().map(|v| v * v).sum::<f64>();

        self.inputs.push(point);
        self.observations.push(value);

        if pivot > PIVOT_TOLERANCE * diag && pivot.is_finite() {
            let d = pivot.sqrt();
            let a = (value - l.iter().zip(&self.factor.alpha).map(|(x, y)| x * y).sum::<f64>()) / d;
            self.factor.packed.extend_from_slice(&l);
            self.factor.packed.push(d);
            self.factor.alpha.push(a);
            self.factor.appends += 1;
            if self.factor.appends >= REBUILD_INTERVAL {
                self.refactor(self.factor.jitter)?;
            }
            Ok(())
        } else {
            let result = self.refactor(self.factor.jitter);
            if result.is_err() {
                self.inputs.pop();
                self.observations.pop();
            }
            result
        }
    }

    /// Factorizes from scratch, starting at `min_jitter` and escalating along
    /// [`JITTER_LADDER`] until the factorization succeeds.
    fn refactor(&mut self, min_jitter: f64) -> Result<()> {
        let mut last = min_jitter;
        for &jitter in JITTER_LADDER.iter().filter(|&&j| j >= min_jitter) {
            last = jitter;
            if let Some(factor) = self.factorize(jitter) {
                let generation = self.factor.generation + 1;
                self.factor = Factor { generation, ..factor };
                return Ok(());
            }
        }
        Err(Error::Singular { jitter: last })
    }

    fn factorize(&self, jitter: f64) -> Option<Factor> {
        let n = self.inputs.len();
        let mut packed = vec![0.0; n * (n + 1) / 2];
        for i in 0..n {
            let start_i = i * (i + 1) / 2;
            for j in 0..=i {
                let start_j = j * (j + 1) / 2;
                let mut sum = self.covariance.cov(self.inputs[i], self.inputs[j]);
                if i == j {
                    sum += self.noise_var + jitter;
                }
                let dot: f64 = (0..j).map(|k| packed[start_i + k] * packed[start_j + k]).sum();
                sum -= dot;
                if i == j {
                    let diag = self.covariance.variance(self.inputs[i]) + self.noise_var + jitter;
                    if !(sum > PIVOT_TOLERANCE * diag) || !sum.is_finite() {
                        return None;
                    }
                    packed[start_i + i] = sum.sqrt();
                } else {
                    packed[start_i + j] = sum / packed[start_j + j];
                }
            }
        }
        let mut factor = Factor { packed, alpha: Vec::new(), jitter, appends: 0, generation: 0 };
        factor.alpha = factor.forward(&self.observations);
        Some(factor)
    }

    /// Posterior means and variances at the query points. Variances are
    /// clamped at zero.
    pub fn posterior(&self, queries: &[usize]) -> (Vec<f64>, Vec<f64>) {
        queries
            .iter()
            .map(|&q| {
                let v = self.project(q);
                let mean: f64 = v.iter().zip(&self.factor.alpha).map(|(a, b)| a * b).sum();
                let var = self.covariance.variance(q) - v.iter().map(|x| x * x).sum::<f64>();
                (mean, var.max(0.0))
            })
            .unzip()
    }

    /// Posterior covariance `k_t(a, b)`, not clamped.
    pub fn posterior_cov(&self, a: usize, b: usize) -> f64 {
        let va = self.project(a);
        let vb = if a == b { va.clone() } else { self.project(b) };
        self.covariance.cov(a, b) - va.iter().zip(&vb).map(|(x, y)| x * y).sum::<f64>()
    }
}

impl fmt::Debug for GpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GpModel")
            .field("covariance", &self.covariance)
            .field("noise_std", &self.noise_std())
            .field("observations", &self.inputs.len())
            .field("jitter", &self.factor.jitter)
            .finish()
    }
}
