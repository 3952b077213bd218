use std::sync::Arc;

use super::Environment;
use crate::error::{Error, Result};
use crate::gp::{Covariance, GpModel, PosteriorTracker};
use crate::mdp::StateId;

/// The explorer's model of the safety feature.
pub trait SafetyBelief {
    fn num_states(&self) -> usize;

    /// Posterior means and variances for every state.
    fn posterior(&self) -> (Vec<f64>, Vec<f64>);

    /// Measures `state` in `env`, updates the model and returns the raw
    /// observation.
    fn observe(&mut self, state: StateId, env: &mut Environment) -> Result<f64>;
}

/// A GP placed directly on the safety feature of every modeled state.
///
/// States with a known value have zero posterior variance and are never
/// added to the GP; measuring them only consumes noise.
#[derive(Clone, Debug)]
pub struct GpBelief {
    model: GpModel,
    tracker: PosteriorTracker,
    known: Vec<Option<f64>>,
    slot: Vec<Option<usize>>,
}

impl GpBelief {
    pub fn new(covariance: Arc<dyn Covariance>, noise_std: f64, num_states: usize) -> Result<Self> {
        Self::with_known(covariance, noise_std, vec![None; num_states])
    }

    /// Belief where `known[s] = Some(v)` fixes the value of `s` to `v`.
    pub fn with_known(covariance: Arc<dyn Covariance>, noise_std: f64, known: Vec<Option<f64>>) -> Result<Self> {
        let model = GpModel::new(covariance, noise_std)?;
        let queries: Vec<usize> = (0..known.len()).filter(|&s| known[s].is_none()).collect();
        let mut slot = vec![None; known.len()];
        for (k, &q) in queries.iter().enumerate() {
            slot[q] = Some(k);
        }
        let tracker = PosteriorTracker::new(&model, queries);
        Ok(Self { model, tracker, known, slot })
    }

    pub fn model(&self) -> &GpModel {
        &self.model
    }
}

impl SafetyBelief for GpBelief {
    fn num_states(&self) -> usize {
        self.known.len()
    }

    fn posterior(&self) -> (Vec<f64>, Vec<f64>) {
        (0..self.known.len())
            .map(|s| match (self.known[s], self.slot[s]) {
                (Some(v), _) => (v, 0.0),
                (None, Some(k)) => (self.tracker.mean(k), self.tracker.variance(k)),
                (None, None) => unreachable!("every unknown state is tracked"),
            })
            .unzip()
    }

    fn observe(&mut self, state: StateId, env: &mut Environment) -> Result<f64> {
        if state.0 >= self.known.len() {
            return Err(Error::UnknownState(state));
        }
        let y = env.measure(state);
        if self.known[state.0].is_none() {
            self.model.observe(state.0, y)?;
            self.tracker.sync(&self.model);
        }
        Ok(y)
    }
}
