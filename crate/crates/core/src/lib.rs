//! Safe exploration of finite deterministic Markov decision processes.
//!
//! The safety feature of every state is unknown a priori and modeled by a
//! Gaussian process. Exploration starts from a seed set that is known to be
//! safe and only ever visits states that are classified safe with high
//! confidence *and* from which the agent can return to the seed.
//!
//! Module map:
//!
//! - [`gp`]: exact GP regression, confidence bands and β schedules.
//! - [`mdp`]: deterministic MDPs, grid worlds and the action-state augmentation.
//! - [`reach`]: set operators (safe, reach, return) and their fixpoints.
//! - [`safeset`]: the classification step (safe set, ergodic set, expanders).
//! - [`planner`]: shortest paths restricted to a set of states.
//! - [`explorer`]: the main exploration loop, baselines and the simulated environment.
//! - [`terrain`]: elevation grids, synthetic terrain and height-difference safety.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod explorer;
pub mod gp;
pub mod mdp;
pub mod planner;
pub mod reach;
pub mod safeset;
pub mod terrain;

pub use error::{Error, Result};
pub use explorer::{
    run_baseline, run_safemdp, run_strategy, Baseline, Environment, ExplorationTrace, ExplorerConfig, GpBelief,
    SafetyBelief, Strategy, TerminalReason,
};
pub use gp::{BetaSchedule, ConfidenceBands, GpModel, Kernel, KernelKind};
pub use mdp::{Action, AugmentedMdp, AugmentedState, Mdp, Metric, StateId};
pub use planner::PathPlan;
pub use reach::{SafeRule, StateSet};
pub use safeset::{ClassifierMode, SafeSets};
