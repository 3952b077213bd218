use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    SquaredExponential,
    /// Matérn with smoothness ν = 5/2.
    Matern52,
}

/// Stationary covariance function of a distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kernel {
    kind: KernelKind,
    lengthscale: f64,
    prior_std: f64,
}

impl Kernel {
    pub fn new(kind: KernelKind, lengthscale: f64, prior_std: f64) -> Result<Self> {
        if !(lengthscale > 0.0 && lengthscale.is_finite()) {
            return Err(Error::InvalidParameter(format!("lengthscale must be positive, got {lengthscale}")));
        }
        if !(prior_std > 0.0 && prior_std.is_finite()) {
            return Err(Error::InvalidParameter(format!("prior std must be positive, got {prior_std}")));
        }
        Ok(Self { kind, lengthscale, prior_std })
    }

    pub fn matern52(lengthscale: f64, prior_std: f64) -> Result<Self> {
        Self::new(KernelKind::Matern52, lengthscale, prior_std)
    }

    pub fn squared_exponential(lengthscale: f64, prior_std: f64) -> Result<Self> {
        Self::new(KernelKind::SquaredExponential, lengthscale, prior_std)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn lengthscale(&self) -> f64 {
        self.lengthscale
    }

    pub fn prior_std(&self) -> f64 {
        self.prior_std
    }

    /// Prior variance `k(x, x)`.
    pub fn variance(&self) -> f64 {
        self.prior_std * self.prior_std
    }

    /// Covariance of two points at the given distance.
    pub fn eval(&self, distance: f64) -> f64 {
        let r = distance / self.lengthscale;
        let shape = match self.kind {
            KernelKind::SquaredExponential => (-0.5 * r * r).exp(),
            KernelKind::Matern52 => {
                let sr = 5f64.sqrt() * r;
                (1.0 + sr + sr * sr / 3.0) * (-sr).exp()
            }
        };
        self.variance() * shape
    }
}

/// Prior covariance between two points that are `distance` apart.
pub fn kernel_eval(kernel: &Kernel, distance: f64) -> f64 {
    kernel.eval(distance)
}
