use std::fmt;
use std::sync::Arc;

use super::Kernel;
use crate::mdp::{Metric, StateId};

/// Prior covariance between indexed points.
pub trait Covariance: Send + Sync + fmt::Debug {
    fn cov(&self, a: usize, b: usize) -> f64;

    fn variance(&self, a: usize) -> f64 {
        self.cov(a, a)
    }
}

/// A stationary kernel evaluated on the distances of a metric.
#[derive(Clone, Debug)]
pub struct StationaryCovariance {
    pub kernel: Kernel,
    pub metric: Metric,
}

impl StationaryCovariance {
    pub fn new(kernel: Kernel, metric: Metric) -> Self {
        Self { kernel, metric }
    }
}

impl Covariance for StationaryCovariance {
    fn cov(&self, a: usize, b: usize) -> f64 {
        self.kernel.eval(self.metric.distance(StateId(a), StateId(b)))
    }
}

/// Covariance of differences `g(p) = f(u) - f(v)` of an underlying process `f`:
///
/// `k_Δ((u, v), (u', v')) = k(u, u') - k(u, v') - k(v, u') + k(v, v')`.
///
/// Points without a pair have zero covariance with everything.
#[derive(Clone, Debug)]
pub struct DifferenceCovariance {
    base: Arc<dyn Covariance>,
    pairs: Vec<Option<(usize, usize)>>,
}

impl DifferenceCovariance {
    pub fn new(base: Arc<dyn Covariance>, pairs: Vec<Option<(usize, usize)>>) -> Self {
        Self { base, pairs }
    }

    pub fn pair(&self, p: usize) -> Option<(usize, usize)> {
        self.pairs.get(p).copied().flatten()
    }
}

impl Covariance for DifferenceCovariance {
    fn cov(&self, a: usize, b: usize) -> f64 {
        match (self.pair(a), self.pair(b)) {
            (Some((u, v)), Some((x, y))) => {
                let k = |i, j| self.base.cov(i, j);
                k(u, x) - k(u, y) - k(v, x) + k(v, y)
            }
            _ => 0.0,
        }
    }
}
