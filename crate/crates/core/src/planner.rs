//! Shortest paths that stay inside a set of states.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::mdp::{Action, Mdp, StateId};
use crate::reach::StateSet;

/// A sequence of actions and the states it visits, including both endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathPlan {
    pub actions: Vec<Action>,
    pub states: Vec<StateId>,
}

impl PathPlan {
    pub fn hops(&self) -> usize {
        self.actions.len()
    }
}

/// Cost-to-go to `to` for every state, moving only through `allowed`.
/// Every action costs one.
fn distances_to(mdp: &Mdp, allowed: &StateSet, to: StateId) -> Vec<Option<u32>> {
    let mut dist = vec![None; mdp.num_states()];
    let mut heap = BinaryHeap::new();
    dist[to.0] = Some(0u32);
    heap.push(Reverse((0u32, to.0)));
    while let Some(Reverse((d, s))) = heap.pop() {
        if dist[s] != Some(d) {
            continue;
        }
        for &p in mdp.predecessors(StateId(s)) {
            if !allowed.contains(p) {
                continue;
            }
            let nd = d + 1;
            if dist[p.0].map_or(true, |old| nd < old) {
                dist[p.0] = Some(nd);
                heap.push(Reverse((nd, p.0)));
            }
        }
    }
    dist
}

/// Minimum-hop path from `from` to `to` through `allowed`. Among shortest
/// paths the lexicographically smallest action sequence is returned.
pub fn shortest_safe_path(mdp: &Mdp, allowed: &StateSet, from: StateId, to: StateId) -> Result<PathPlan> {
    for s in [from, to] {
        if s.0 >= mdp.num_states() {
            return Err(Error::UnknownState(s));
        }
    }
    if !allowed.contains(from) || !allowed.contains(to) {
        return Err(Error::NoPath { from, to });
    }
    let dist = distances_to(mdp, allowed, to);
    let Some(mut remaining) = dist[from.0] else {
        return Err(Error::NoPath { from, to });
    };
    let mut plan = PathPlan { actions: Vec::with_capacity(remaining as usize), states: vec![from] };
    let mut s = from;
    while remaining > 0 {
        let (a, next) = mdp
            .actions(s)
            .iter()
            .copied()
            .find(|&(_, next)| allowed.contains(next) && dist[next.0] == Some(remaining - 1))
            .expect("a state at finite distance has a successor one step closer");
        plan.actions.push(a);
        plan.states.push(next);
        s = next;
        remaining -= 1;
    }
    Ok(plan)
}
