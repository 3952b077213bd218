use std::fmt;

use fixedbitset::FixedBitSet;

use crate::mdp::StateId;

/// A set of states of a fixed MDP, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: FixedBitSet,
}

impl StateSet {
    pub fn empty(num_states: usize) -> Self {
        Self { bits: FixedBitSet::with_capacity(num_states) }
    }

    pub fn full(num_states: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(num_states);
        bits.insert_range(..);
        Self { bits }
    }

    pub fn from_states(num_states: usize, states: impl IntoIterator<Item = StateId>) -> Self {
        let mut set = Self::empty(num_states);
        for s in states {
            set.insert(s);
        }
        set
    }

    /// Builds a set from the low `num_states` bits of `mask`.
    pub fn from_mask(num_states: usize, mask: u64) -> Self {
        Self::from_states(num_states, (0..num_states.min(64)).filter(|i| mask >> i & 1 == 1).map(StateId))
    }

    /// Number of states of the underlying MDP.
    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, s: StateId) -> bool {
        self.bits.contains(s.0)
    }

    /// Inserts `s` and reports whether it was newly added.
    #[inline]
    pub fn insert(&mut self, s: StateId) -> bool {
        !self.bits.put(s.0)
    }

    pub fn remove(&mut self, s: StateId) {
        self.bits.set(s.0, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.bits.ones().map(StateId)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &StateSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> StateSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        StateSet { bits }
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Membership as a string of `0`/`1`, lowest state id first.
    pub fn to_bitstring(&self) -> String {
        (0..self.capacity()).map(|i| if self.bits.contains(i) { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.bits.ones()).finish()
    }
}
