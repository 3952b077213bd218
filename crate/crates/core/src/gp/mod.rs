//! Exact Gaussian-process regression over a finite index set.
//!
//! Points are plain `usize` indices (usually state ids); all geometry lives
//! in the [`Covariance`] implementation. The prior mean is zero.

mod bands;
mod beta;
mod covariance;
mod kernel;
mod model;
mod tracker;

pub use bands::{update_bands, ConfidenceBands};
pub use beta::BetaSchedule;
pub use covariance::{Covariance, DifferenceCovariance, StationaryCovariance};
pub use kernel::{kernel_eval, Kernel, KernelKind};
pub use model::{GpModel, JITTER_LADDER, REBUILD_INTERVAL};
pub use tracker::PosteriorTracker;
