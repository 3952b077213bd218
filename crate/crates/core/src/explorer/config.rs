use crate::error::{Error, Result};
use crate::gp::BetaSchedule;
use crate::mdp::{Mdp, StateId};
use crate::reach::{r_ret_fixpoint, StateSet};
use crate::safeset::ClassifierMode;

/// Parameters of an exploration run.
#[derive(Clone, Debug)]
pub struct ExplorerConfig {
    pub beta: BetaSchedule,
    pub mode: ClassifierMode,
    /// Lipschitz constant used for expanders (and for the safe set in
    /// Lipschitz mode).
    pub lipschitz_for_expanders: f64,
    /// Accuracy `ε`: the run converges once the widest candidate is narrower.
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Seed set `S₀`, known to be safe.
    pub seed_set: StateSet,
    /// Also measure every state traversed on the way to a target.
    pub measure_along_path: bool,
    /// Initial position; defaults to the lowest seed state.
    pub start: Option<StateId>,
}

impl ExplorerConfig {
    pub fn new(seed_set: StateSet, beta: BetaSchedule, mode: ClassifierMode, lipschitz: f64, epsilon: f64) -> Self {
        Self {
            beta,
            mode,
            lipschitz_for_expanders: lipschitz,
            epsilon,
            max_iterations: 525,
            seed_set,
            measure_along_path: false,
            start: None,
        }
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn start_state(&self) -> Option<StateId> {
        self.start.or_else(|| self.seed_set.iter().next())
    }

    /// Checks parameters and that all seed states can reach each other
    /// without leaving the seed set.
    pub fn validate(&self, mdp: &Mdp) -> Result<()> {
        self.mode.validate()?;
        if !(self.lipschitz_for_expanders > 0.0 && self.lipschitz_for_expanders.is_finite()) {
            return Err(Error::Config(format!(
                "expander Lipschitz constant must be positive, got {}",
                self.lipschitz_for_expanders
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        if self.seed_set.capacity() != mdp.num_states() {
            return Err(Error::DimensionMismatch { expected: mdp.num_states(), found: self.seed_set.capacity() });
        }
        if self.seed_set.is_empty() {
            return Err(Error::Config("seed set is empty".into()));
        }
        if let Some(start) = self.start {
            if !self.seed_set.contains(start) {
                return Err(Error::Config(format!("start state {start} is not in the seed set")));
            }
        }
        for s in self.seed_set.iter() {
            let back = r_ret_fixpoint(mdp, &self.seed_set, &StateSet::from_states(mdp.num_states(), [s]));
            if !self.seed_set.is_subset(&back) {
                let stranded = self.seed_set.difference(&back).iter().next().expect("nonempty difference");
                return Err(Error::Config(format!(
                    "seed state {stranded} cannot return to seed state {s} within the seed set"
                )));
            }
        }
        Ok(())
    }
}
