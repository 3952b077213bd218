//! Set operators over MDP states and their least fixpoints.
//!
//! Given true safety values `r`, these operators define the largest set of
//! states that any ε-accurate exploration strategy can certify starting from
//! a seed: states must be certified safe, reachable in one step from the
//! current set, and able to return to the current set through certified
//! states. [`r_eps_fixpoint`] iterates that expansion to convergence and is
//! the completeness benchmark for the explorer.
//!
//! Argument order for returnability is `(through, target)`: the result holds
//! the states that can reach `target` via paths inside `through`.
//!
//! All comparisons against the threshold `h` are inclusive.

mod stateset;

pub use stateset::StateSet;

use std::collections::VecDeque;

use crate::mdp::{Mdp, StateId};

/// How safety certificates propagate from a certified state to others.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SafeRule {
    /// A witness `s'` certifies `s` when `r(s') - eps - L d(s, s') >= h`.
    Lipschitz { lipschitz: f64 },
    /// A state is certified from its own value: `r(s) - eps >= h`. This is
    /// the counterpart of classifying directly from GP confidence bands.
    Pointwise,
}

/// True safety values and the certification rule used by the operators.
#[derive(Clone, Copy, Debug)]
pub struct SafetyParams<'a> {
    pub values: &'a [f64],
    pub eps: f64,
    pub h: f64,
    pub rule: SafeRule,
}

impl<'a> SafetyParams<'a> {
    pub fn lipschitz(values: &'a [f64], eps: f64, lipschitz: f64, h: f64) -> Self {
        Self { values, eps, h, rule: SafeRule::Lipschitz { lipschitz } }
    }

    pub fn pointwise(values: &'a [f64], eps: f64, h: f64) -> Self {
        Self { values, eps, h, rule: SafeRule::Pointwise }
    }

    /// Adds to `out` every state certified by the single witness `w`.
    fn certify_from(&self, mdp: &Mdp, w: StateId, out: &mut StateSet) {
        match self.rule {
            SafeRule::Lipschitz { lipschitz } => {
                let slack = self.values[w.0] - self.eps - self.h;
                if slack < 0.0 {
                    return;
                }
                for s in mdp.states() {
                    if slack - lipschitz * mdp.distance(s, w) >= 0.0 {
                        out.insert(s);
                    }
                }
            }
            SafeRule::Pointwise => {}
        }
    }

    fn pointwise_set(&self, n: usize) -> StateSet {
        let mut out = StateSet::empty(n);
        if self.rule == SafeRule::Pointwise {
            for (s, &r) in self.values.iter().enumerate() {
                if r - self.eps >= self.h {
                    out.insert(StateId(s));
                }
            }
        }
        out
    }
}

/// States certified safe from `base`, always including `base` itself.
pub fn r_safe(mdp: &Mdp, base: &StateSet, params: &SafetyParams<'_>) -> StateSet {
    let mut out = base.union(&params.pointwise_set(mdp.num_states()));
    for w in base.iter() {
        params.certify_from(mdp, w, &mut out);
    }
    out
}

/// `S ∪ {s | ∃ s' ∈ S: r(s') - eps - L d(s, s') >= h}`.
pub fn r_safe_eps(mdp: &Mdp, base: &StateSet, r_values: &[f64], eps: f64, lipschitz: f64, h: f64) -> StateSet {
    r_safe(mdp, base, &SafetyParams::lipschitz(r_values, eps, lipschitz, h))
}

/// One-step reachable states: `base` plus every successor of a state in `base`.
pub fn r_reach(mdp: &Mdp, base: &StateSet) -> StateSet {
    let mut out = base.clone();
    for s in base.iter() {
        for next in mdp.successors(s) {
            out.insert(next);
        }
    }
    out
}

/// One-step returnable states: `target` plus every state of `through` with an
/// action leading into `target`.
pub fn r_ret_one(mdp: &Mdp, through: &StateSet, target: &StateSet) -> StateSet {
    let mut out = target.clone();
    for s in through.iter() {
        if mdp.successors(s).any(|next| target.contains(next)) {
            out.insert(s);
        }
    }
    out
}

/// Least fixpoint of [`r_ret_one`] above `target`: all states that can reach
/// `target` along a path whose states before the endpoint lie in `through`.
pub fn r_ret_fixpoint(mdp: &Mdp, through: &StateSet, target: &StateSet) -> StateSet {
    r_ret_iterate(mdp, through, target).0
}

/// [`r_ret_fixpoint`] together with the number of operator applications
/// performed, including the final one that leaves the set unchanged.
///
/// Each round only inspects predecessors of the states added in the previous
/// round; the sequence of iterates is the same as applying [`r_ret_one`] to
/// the whole set.
pub fn r_ret_iterate(mdp: &Mdp, through: &StateSet, target: &StateSet) -> (StateSet, usize) {
    let mut result = target.clone();
    let mut frontier: Vec<StateId> = target.iter().collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut added = Vec::new();
        for &x in &frontier {
            for &p in mdp.predecessors(x) {
                if through.contains(p) && result.insert(p) {
                    added.push(p);
                }
            }
        }
        if added.is_empty() {
            return (result, rounds);
        }
        frontier = added;
    }
}

/// One expansion step: `R_safe(S) ∩ R_reach(S) ∩ R̄_ret(R_safe(S), S)`.
pub fn r_eps_with(mdp: &Mdp, base: &StateSet, params: &SafetyParams<'_>) -> StateSet {
    let safe = r_safe(mdp, base, params);
    let mut out = safe.intersection(&r_reach(mdp, base));
    out.intersect_with(&r_ret_fixpoint(mdp, &safe, base));
    out
}

/// [`r_eps_with`] under the Lipschitz rule.
pub fn r_eps(mdp: &Mdp, base: &StateSet, r_values: &[f64], eps: f64, lipschitz: f64, h: f64) -> StateSet {
    r_eps_with(mdp, base, &SafetyParams::lipschitz(r_values, eps, lipschitz, h))
}

/// Result of a fixpoint iteration.
#[derive(Clone, Debug)]
pub struct Fixpoint {
    pub set: StateSet,
    /// Operator applications, including the final one that changed nothing.
    pub iterations: usize,
}

/// Least fixpoint of [`r_eps_with`] above `seed`: the largest set of states
/// that can be certified safe, reached and left again starting from `seed`.
///
/// The certified set is maintained incrementally: a witness only needs to be
/// scanned once, when it first enters the iterate.
pub fn r_eps_fixpoint_with(mdp: &Mdp, seed: &StateSet, params: &SafetyParams<'_>) -> Fixpoint {
    let n = mdp.num_states();
    let mut current = seed.clone();
    if current.is_empty() {
        return Fixpoint { set: current, iterations: 1 };
    }
    let mut safe = current.union(&params.pointwise_set(n));
    for w in current.iter() {
        params.certify_from(mdp, w, &mut safe);
    }
    let mut reach = r_reach(mdp, &current);
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut next = safe.intersection(&reach);
        next.intersect_with(&r_ret_fixpoint(mdp, &safe, &current));
        let added = next.difference(&current);
        if added.is_empty() {
            return Fixpoint { set: current, iterations };
        }
        for w in added.iter() {
            params.certify_from(mdp, w, &mut safe);
            safe.insert(w);
            reach.insert(w);
            for s in mdp.successors(w) {
                reach.insert(s);
            }
        }
        current = next;
    }
}

/// [`r_eps_fixpoint_with`] under the Lipschitz rule.
pub fn r_eps_fixpoint(mdp: &Mdp, seed: &StateSet, r_values: &[f64], eps: f64, lipschitz: f64, h: f64) -> StateSet {
    r_eps_fixpoint_with(mdp, seed, &SafetyParams::lipschitz(r_values, eps, lipschitz, h)).set
}

/// Shortest hop distances from `from` to every state, moving only through
/// states of `allowed` (the start must be in `allowed`). Unreachable states
/// get `None`.
pub fn bfs_distances(mdp: &Mdp, allowed: &StateSet, from: StateId) -> Vec<Option<usize>> {
    let mut dist = vec![None; mdp.num_states()];
    if !allowed.contains(from) {
        return dist;
    }
    dist[from.0] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        let d = dist[s.0].unwrap();
        for next in mdp.successors(s) {
            if allowed.contains(next) && dist[next.0].is_none() {
                dist[next.0] = Some(d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}
