use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Scaling `β_t` of the GP confidence intervals `μ ± √β_t σ`.
#[derive(Clone)]
pub enum BetaSchedule {
    Constant(f64),
    /// `2 B + 300 γ_t ln³(t / δ)` with a caller-supplied information capacity `γ_t`.
    Theoretical {
        rkhs_bound: f64,
        delta: f64,
        gamma: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
    },
}

impl BetaSchedule {
    pub fn constant(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Self::Constant(value))
        } else {
            Err(Error::InvalidParameter(format!("constant beta must be positive, got {value}")))
        }
    }

    pub fn theoretical(
        rkhs_bound: f64,
        delta: f64,
        gamma: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(rkhs_bound > 0.0) {
            return Err(Error::InvalidParameter(format!("RKHS bound must be positive, got {rkhs_bound}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
        }
        Ok(Self::Theoretical { rkhs_bound, delta, gamma: Arc::new(gamma) })
    }

    /// `β_t` for measurement index `t >= 1`.
    pub fn beta(&self, t: u64) -> Result<f64> {
        match self {
            Self::Constant(value) => Ok(*value),
            Self::Theoretical { rkhs_bound, delta, gamma } => {
                let ratio = t as f64 / delta;
                if !(ratio > 1.0) {
                    return Err(Error::BetaDomain { t });
                }
                Ok(2.0 * rkhs_bound + 300.0 * gamma(t) * ratio.ln().powi(3))
            }
        }
    }
}

impl fmt::Debug for BetaSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(v) => f.debug_tuple("Constant").field(v).finish(),
            Self::Theoretical { rkhs_bound, delta, .. } => f
                .debug_struct("Theoretical")
                .field("rkhs_bound", rkhs_bound)
                .field("delta", delta)
                .finish_non_exhaustive(),
        }
    }
}
