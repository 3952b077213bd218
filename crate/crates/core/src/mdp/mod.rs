//! Finite deterministic MDPs.
//!
//! States are dense integer ids `0..n`. Every state owns a list of
//! `(action, successor)` pairs sorted by action label, so stepping is a
//! binary search and iteration order is deterministic.

mod augment;
mod grid;
mod metric;

use std::fmt;

use crate::error::{Error, Result};

pub use augment::{augment, AugmentedMdp, AugmentedState};
pub use grid::{grid_mdp, masked_grid_mdp, GridLayout};
pub use metric::Metric;

/// Dense state index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// Small integer action label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(pub u8);

impl Action {
    pub const UP: Action = Action(0);
    pub const DOWN: Action = Action(1);
    pub const LEFT: Action = Action(2);
    pub const RIGHT: Action = Action(3);
    pub const STAY: Action = Action(4);
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Action::UP => f.write_str("up"),
            Action::DOWN => f.write_str("down"),
            Action::LEFT => f.write_str("left"),
            Action::RIGHT => f.write_str("right"),
            Action::STAY => f.write_str("stay"),
            Action(a) => write!(f, "a{a}"),
        }
    }
}

/// A finite MDP with a known deterministic transition function `f(s, a)` and
/// a metric over its states.
#[derive(Clone, Debug)]
pub struct Mdp {
    transitions: Vec<Vec<(Action, StateId)>>,
    predecessors: Vec<Vec<StateId>>,
    metric: Metric,
}

impl Mdp {
    /// Builds an MDP from per-state `(action, successor)` lists.
    ///
    /// States without any action receive a `stay` self-loop so that every
    /// state has at least one action. Duplicate labels within a state and
    /// out-of-range successors are rejected.
    pub fn new(mut transitions: Vec<Vec<(Action, StateId)>>, metric: Metric) -> Result<Self> {
        let n = transitions.len();
        if n == 0 {
            return Err(Error::InvalidParameter("an MDP needs at least one state".into()));
        }
        if let Some(m) = metric.num_states() {
            if m != n {
                return Err(Error::DimensionMismatch { expected: n, found: m });
            }
        }
        let mut predecessors = vec![Vec::new(); n];
        for (s, actions) in transitions.iter_mut().enumerate() {
            if actions.is_empty() {
                actions.push((Action::STAY, StateId(s)));
            }
            actions.sort_by_key(|&(a, _)| a);
            for pair in actions.windows(2) {
                if pair[0].0 == pair[1].0 {
                    return Err(Error::InvalidParameter(format!("state {s} has duplicate action {}", pair[0].0)));
                }
            }
            for &(_, next) in actions.iter() {
                if next.0 >= n {
                    return Err(Error::UnknownState(next));
                }
                predecessors[next.0].push(StateId(s));
            }
        }
        for preds in predecessors.iter_mut() {
            preds.sort_unstable();
            preds.dedup();
        }
        Ok(Self { transitions, predecessors, metric })
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.num_states()).map(StateId)
    }

    /// The `(action, successor)` pairs available in `s`, sorted by action.
    pub fn actions(&self, s: StateId) -> &[(Action, StateId)] {
        &self.transitions[s.0]
    }

    pub fn successors(&self, s: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.transitions[s.0].iter().map(|&(_, next)| next)
    }

    /// Distinct states with at least one action leading to `s`.
    pub fn predecessors(&self, s: StateId) -> &[StateId] {
        &self.predecessors[s.0]
    }

    /// The transition function `f(s, a)`.
    pub fn step(&self, s: StateId, a: Action) -> Result<StateId> {
        let actions = self.transitions.get(s.0).ok_or(Error::UnknownState(s))?;
        actions
            .binary_search_by_key(&a, |&(label, _)| label)
            .map(|i| actions[i].1)
            .map_err(|_| Error::UnknownAction { state: s, action: a })
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn distance(&self, a: StateId, b: StateId) -> f64 {
        self.metric.distance(a, b)
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }
}
