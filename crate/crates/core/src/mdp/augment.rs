use std::sync::Arc;

use super::{Action, Mdp, Metric, StateId};

/// What an augmented state stands for in the base MDP.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AugmentedState {
    Original(StateId),
    /// The abstract state reached by taking `action` in `state`.
    ActionState(StateId, Action),
}

/// A base MDP with one extra state per `(state, action)` pair.
///
/// Taking action `a` in `s` first leads to the action-state `s_a`, whose
/// only action (labelled `a` as well) leads on to `f(s, a)`. Safety features
/// that depend on actions become features of action-states.
///
/// Ids `0..n` are the original states; action-states follow in order of
/// their source state and action label.
#[derive(Clone, Debug)]
pub struct AugmentedMdp {
    base: Mdp,
    mdp: Mdp,
    action_states: Vec<Vec<(Action, StateId)>>,
    origin: Vec<AugmentedState>,
}

/// Builds the action-state augmentation of `mdp`.
///
/// The augmented metric anchors every action-state at its source state and
/// adds half the base metric's unit length for each action-state endpoint,
/// so `d(s_a, s) = unit / 2` and `d(s_a, x) = d(s, x) + unit / 2` otherwise.
pub fn augment(mdp: &Mdp) -> AugmentedMdp {
    let n = mdp.num_states();
    let half = mdp.metric().unit() / 2.0;
    let total = n + mdp.num_transitions();

    let mut origin: Vec<AugmentedState> = (0..n).map(|s| AugmentedState::Original(StateId(s))).collect();
    let mut anchors: Vec<StateId> = (0..n).map(StateId).collect();
    let mut offsets = vec![0.0; total];
    let mut action_states = Vec::with_capacity(n);
    let mut transitions: Vec<Vec<(Action, StateId)>> = Vec::with_capacity(total);

    for s in mdp.states() {
        let mut own = Vec::with_capacity(mdp.actions(s).len());
        for &(a, _) in mdp.actions(s) {
            let id = StateId(origin.len());
            origin.push(AugmentedState::ActionState(s, a));
            anchors.push(s);
            offsets[id.0] = half;
            own.push((a, id));
        }
        transitions.push(own.clone());
        action_states.push(own);
    }
    for s in mdp.states() {
        for &(a, next) in mdp.actions(s) {
            transitions.push(vec![(a, next)]);
        }
    }

    let metric = Metric::Augmented {
        base: Box::new(mdp.metric().clone()),
        anchors: Arc::from(anchors),
        offsets: Arc::from(offsets),
    };
    let augmented = Mdp::new(transitions, metric).expect("augmentation of a valid MDP is valid");
    AugmentedMdp { base: mdp.clone(), mdp: augmented, action_states, origin }
}

impl AugmentedMdp {
    /// The augmented MDP.
    pub fn mdp(&self) -> &Mdp {
        &self.mdp
    }

    pub fn base(&self) -> &Mdp {
        &self.base
    }

    pub fn num_states(&self) -> usize {
        self.mdp.num_states()
    }

    pub fn original_of(&self, s: StateId) -> AugmentedState {
        self.origin[s.0]
    }

    /// The action-state for taking `a` in the base state `s`.
    pub fn action_state_of(&self, s: StateId, a: Action) -> Option<StateId> {
        let own = self.action_states.get(s.0)?;
        own.binary_search_by_key(&a, |&(label, _)| label).ok().map(|i| own[i].1)
    }

    /// Augmented id of a base state (identical to the base id).
    pub fn original_state(&self, s: StateId) -> StateId {
        debug_assert!(s.0 < self.base.num_states());
        s
    }

    pub fn is_action_state(&self, s: StateId) -> bool {
        matches!(self.origin[s.0], AugmentedState::ActionState(..))
    }

    /// `(source, successor)` of the base transition behind an action-state.
    pub fn transition_of(&self, s: StateId) -> Option<(StateId, StateId)> {
        match self.origin[s.0] {
            AugmentedState::ActionState(src, a) => Some((src, self.base.step(src, a).ok()?)),
            AugmentedState::Original(_) => None,
        }
    }

    pub fn action_state_ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (self.base.num_states()..self.mdp.num_states()).map(StateId)
    }
}
