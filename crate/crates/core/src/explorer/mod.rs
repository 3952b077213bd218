//! The exploration loop, its baselines and the simulated environment.
//!
//! Each iteration updates the confidence bands from the belief, classifies
//! states into safe, ergodic and expander sets, picks the most uncertain
//! candidate, walks there along a shortest path inside the ergodic set and
//! measures it. Every visited state is checked against the true safety
//! values; the first unsafe visit ends the run.

mod belief;
mod config;
mod env;
mod run;

pub use belief::{GpBelief, SafetyBelief};
pub use config::ExplorerConfig;
pub use env::Environment;
pub use run::{run_baseline, run_safemdp, run_strategy};

use std::fmt;
use std::str::FromStr;

use crate::mdp::StateId;
use crate::planner::PathPlan;
use crate::safeset::SafeSets;

/// Comparison strategies for the main algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Baseline {
    /// Samples the most uncertain ergodic state instead of the most
    /// uncertain expander.
    NoExpanders,
    /// Drops the return requirement from the ergodic set.
    NonErgodic,
    /// Samples the most uncertain state anywhere and plans over all states.
    Unsafe,
    /// Takes a uniformly random action every step and measures every state
    /// it visits.
    Random,
}

/// The main algorithm or one of the baselines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    SafeMdp,
    Baseline(Baseline),
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::SafeMdp,
        Strategy::Baseline(Baseline::NoExpanders),
        Strategy::Baseline(Baseline::NonErgodic),
        Strategy::Baseline(Baseline::Unsafe),
        Strategy::Baseline(Baseline::Random),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::SafeMdp => "safemdp",
            Strategy::Baseline(Baseline::NoExpanders) => "no-expanders",
            Strategy::Baseline(Baseline::NonErgodic) => "non-ergodic",
            Strategy::Baseline(Baseline::Unsafe) => "unsafe",
            Strategy::Baseline(Baseline::Random) => "random",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL.into_iter().find(|st| st.name() == s).ok_or_else(|| format!("unknown strategy `{s}`"))
    }
}

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalReason {
    /// The widest candidate is within the accuracy `ε`.
    Converged,
    /// No state can expand the safe set any further.
    ExpandersEmpty,
    MaxIterations,
    /// The agent entered an unsafe state at movement step `step`.
    Violation {
        step: usize,
    },
    /// The planner found no path to the chosen target.
    Stuck,
}

impl TerminalReason {
    pub fn label(&self) -> &'static str {
        match self {
            TerminalReason::Converged => "converged",
            TerminalReason::ExpandersEmpty => "expanders-empty",
            TerminalReason::MaxIterations => "max-iterations",
            TerminalReason::Violation { .. } => "violation",
            TerminalReason::Stuck => "stuck",
        }
    }

    pub fn violation_step(&self) -> Option<usize> {
        match *self {
            TerminalReason::Violation { step } => Some(step),
            _ => None,
        }
    }
}

impl fmt::Display for TerminalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminalReason::Violation { step } => write!(f, "violation at step {step}"),
            other => f.write_str(other.label()),
        }
    }
}

/// One measurement iteration.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub t: usize,
    pub target: StateId,
    pub width: f64,
    pub path: PathPlan,
    pub observation: f64,
    pub sets: SafeSets,
    pub bands_digest: u64,
}

/// Everything recorded during a run.
#[derive(Clone, Debug)]
pub struct ExplorationTrace {
    pub strategy: Strategy,
    pub records: Vec<IterationRecord>,
    pub terminal: TerminalReason,
    /// Movement steps `k`.
    pub agent_steps: usize,
    /// Every state the agent occupied, starting with the initial position.
    pub trajectory: Vec<StateId>,
    /// The last classification, including the one that ended the run.
    pub final_sets: SafeSets,
    /// Empty band intersections resolved during the run.
    pub band_collapses: usize,
}

impl ExplorationTrace {
    /// Number of measurement iterations `t`.
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    /// All classifications in order, ending with [`ExplorationTrace::final_sets`].
    pub fn snapshots(&self) -> impl Iterator<Item = &SafeSets> {
        self.records.iter().map(|r| &r.sets).chain(std::iter::once(&self.final_sets))
    }
}
