//! Classification of states from confidence bands.
//!
//! One iteration of the explorer turns the current bands into three nested
//! sets: the safe set `S_t`, the ergodic safe set `Ŝ_t ⊆ S_t` (safe states
//! that are reachable from and can return to the previous ergodic set), and
//! the expanders `G_t ⊆ Ŝ_t` (states whose optimistic value could certify
//! some currently unclassified state).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gp::ConfidenceBands;
use crate::mdp::{Mdp, Metric, StateId};
use crate::reach::{r_reach, r_ret_fixpoint, StateSet};

/// How the safe set is derived from the bands.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClassifierMode {
    /// `s` is safe when some previously ergodic `s'` has
    /// `l(s') - L d(s, s') >= h`.
    Lipschitz(f64),
    /// `s` is safe when its own lower bound satisfies `l(s) >= h`.
    GpDirect,
}

impl ClassifierMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ClassifierMode::Lipschitz(l) if !(l > 0.0 && l.is_finite()) => {
                Err(Error::InvalidParameter(format!("Lipschitz constant must be positive, got {l}")))
            }
            _ => Ok(()),
        }
    }
}

/// The classification produced in one iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct SafeSets {
    pub safe: StateSet,
    pub ergodic: StateSet,
    pub expanders: StateSet,
    /// `g_t(s)`: number of unclassified states that `s` could certify.
    /// Zero outside the ergodic set.
    pub expander_counts: Vec<usize>,
    pub widths: Vec<f64>,
}

/// States certified by a Lipschitz witness from `witnesses`, without adding
/// the witnesses themselves.
pub fn lipschitz_safe(mdp: &Mdp, lower: &[f64], witnesses: &StateSet, lipschitz: f64, h: f64) -> StateSet {
    let slack: Vec<(StateId, f64)> =
        witnesses.iter().map(|w| (w, lower[w.0] - h)).filter(|&(_, slack)| slack >= 0.0).collect();
    let hits: Vec<bool> = (0..mdp.num_states())
        .into_par_iter()
        .map(|s| slack.iter().any(|&(w, sl)| sl - lipschitz * mdp.distance(StateId(s), w) >= 0.0))
        .collect();
    StateSet::from_states(mdp.num_states(), hits.iter().enumerate().filter(|(_, &b)| b).map(|(s, _)| StateId(s)))
}

/// The safe set `S_t`. Both modes include `prev_ergodic`, so the safe set
/// never shrinks across iterations.
pub fn classify_safe(
    mdp: &Mdp,
    bands: &ConfidenceBands,
    prev_ergodic: &StateSet,
    h: f64,
    mode: ClassifierMode,
) -> StateSet {
    let mut out = match mode {
        ClassifierMode::Lipschitz(l) => lipschitz_safe(mdp, bands.lower(), prev_ergodic, l, h),
        ClassifierMode::GpDirect => StateSet::from_states(
            mdp.num_states(),
            bands.lower().iter().enumerate().filter(|(_, &l)| l >= h).map(|(s, _)| StateId(s)),
        ),
    };
    out.union_with(prev_ergodic);
    out
}

/// The ergodic safe set `Ŝ_t = S_t ∩ R_reach(Ŝ_{t-1}) ∩ R̄_ret(S_t, Ŝ_{t-1})`.
pub fn ergodic_safe(mdp: &Mdp, safe: &StateSet, prev_ergodic: &StateSet) -> Result<StateSet> {
    if !prev_ergodic.is_subset(safe) {
        return Err(Error::ErgodicNotSafe);
    }
    let mut out = safe.intersection(&r_reach(mdp, prev_ergodic));
    out.intersect_with(&r_ret_fixpoint(mdp, safe, prev_ergodic));
    Ok(out)
}

/// `S_t ∩ R_reach(Ŝ_{t-1})`: the ergodic set without the return requirement.
pub fn reachable_safe(mdp: &Mdp, safe: &StateSet, prev_ergodic: &StateSet) -> StateSet {
    safe.intersection(&r_reach(mdp, prev_ergodic))
}

/// Expander counts `g_t(s) = |{s' ∉ S_t : u(s) - L d(s, s') >= h}|` for every
/// `s` in `ergodic`, and the set of states with a positive count.
///
/// Grid and augmented-grid metrics use a row-wise range count over grid
/// cells; other metrics fall back to the pairwise scan of
/// [`expanders_pairwise`].
pub fn expanders(
    mdp: &Mdp,
    ergodic: &StateSet,
    safe: &StateSet,
    bands: &ConfidenceBands,
    lipschitz: f64,
    h: f64,
) -> (StateSet, Vec<usize>) {
    match GridGeometry::of(mdp.metric()) {
        Some(geometry) => {
            let outside = safe.complement();
            let index = CellCounts::new(&geometry, &outside);
            collect_counts(mdp.num_states(), ergodic, |s| {
                let slack = bands.upper()[s.0] - h;
                if slack < 0.0 {
                    0
                } else {
                    index.count_within(&geometry, s, slack, lipschitz)
                }
            })
        }
        None => expanders_pairwise(mdp, ergodic, safe, bands, lipschitz, h),
    }
}

/// [`expanders`] by scanning every (ergodic, unclassified) pair.
pub fn expanders_pairwise(
    mdp: &Mdp,
    ergodic: &StateSet,
    safe: &StateSet,
    bands: &ConfidenceBands,
    lipschitz: f64,
    h: f64,
) -> (StateSet, Vec<usize>) {
    let outside: Vec<StateId> = safe.complement().iter().collect();
    collect_counts(mdp.num_states(), ergodic, |s| {
        let slack = bands.upper()[s.0] - h;
        if slack < 0.0 {
            return 0;
        }
        outside.iter().filter(|&&o| slack - lipschitz * mdp.distance(s, o) >= 0.0).count()
    })
}

fn collect_counts(n: usize, ergodic: &StateSet, count: impl Fn(StateId) -> usize + Sync) -> (StateSet, Vec<usize>) {
    let members: Vec<StateId> = ergodic.iter().collect();
    let per_member: Vec<usize> = members.par_iter().map(|&s| count(s)).collect();
    let mut counts = vec![0; n];
    let mut set = StateSet::empty(n);
    for (&s, &c) in members.iter().zip(&per_member) {
        counts[s.0] = c;
        if c > 0 {
            set.insert(s);
        }
    }
    (set, counts)
}

/// Every state placed at a grid cell plus a non-negative offset, with
/// `d(a, b) = cell_size * |cell a - cell b| + offset a + offset b` for `a != b`.
struct GridGeometry<'m> {
    rows: usize,
    cols: usize,
    cell_size: f64,
    coords: &'m [(usize, usize)],
    anchors: Option<&'m [StateId]>,
    offsets: Option<&'m [f64]>,
}

impl<'m> GridGeometry<'m> {
    fn of(metric: &'m Metric) -> Option<Self> {
        let (coords, cell_size, anchors, offsets) = match metric {
            Metric::Grid { coords, cell_size } => (&coords[..], *cell_size, None, None),
            Metric::Augmented { base, anchors, offsets } => match base.as_ref() {
                Metric::Grid { coords, cell_size } => (&coords[..], *cell_size, Some(&anchors[..]), Some(&offsets[..])),
                _ => return None,
            },
            _ => return None,
        };
        let rows = coords.iter().map(|c| c.0 + 1).max().unwrap_or(0);
        let cols = coords.iter().map(|c| c.1 + 1).max().unwrap_or(0);
        Some(Self { rows, cols, cell_size, coords, anchors, offsets })
    }

    fn cell(&self, s: StateId) -> (usize, usize) {
        match self.anchors {
            Some(anchors) => self.coords[anchors[s.0].0],
            None => self.coords[s.0],
        }
    }

    fn offset(&self, s: StateId) -> f64 {
        self.offsets.map_or(0.0, |o| o[s.0])
    }
}

/// Row prefix sums of unclassified states per cell, one table per distinct
/// offset.
struct CellCounts {
    classes: Vec<(f64, Vec<usize>)>,
}

impl CellCounts {
    fn new(geometry: &GridGeometry<'_>, outside: &StateSet) -> Self {
        let width = geometry.cols + 1;
        let mut classes: Vec<(f64, Vec<usize>)> = Vec::new();
        for s in outside.iter() {
            let off = geometry.offset(s);
            let k = match classes.iter().position(|(o, _)| *o == off) {
                Some(k) => k,
                None => {
                    classes.push((off, vec![0; geometry.rows * width]));
                    classes.len() - 1
                }
            };
            let (r, c) = geometry.cell(s);
            classes[k].1[r * width + c + 1] += 1;
        }
        for (_, table) in &mut classes {
            for row in table.chunks_mut(width) {
                for c in 1..width {
                    row[c] += row[c - 1];
                }
            }
        }
        Self { classes }
    }

    /// Number of unclassified `o` with `slack - L d(s, o) >= 0`.
    fn count_within(&self, geometry: &GridGeometry<'_>, s: StateId, slack: f64, lipschitz: f64) -> usize {
        let (rs, cs) = geometry.cell(s);
        let own = geometry.offset(s);
        let width = geometry.cols + 1;
        let mut total = 0;
        for (off, table) in &self.classes {
            let reach = |dr: usize, dc: usize| {
                let d = (dr as f64).hypot(dc as f64) * geometry.cell_size + own + off;
                slack - lipschitz * d >= 0.0
            };
            let radius = (slack / lipschitz - own - off) / geometry.cell_size;
            if !(radius >= 0.0) {
                continue;
            }
            let max_dr = (radius.floor() as usize + 1).min(geometry.rows);
            let r_lo = rs.saturating_sub(max_dr);
            let r_hi = (rs + max_dr).min(geometry.rows - 1);
            for r in r_lo..=r_hi {
                let dr = r.abs_diff(rs);
                let rem = radius * radius - (dr * dr) as f64;
                let mut w = if rem > 0.0 { rem.sqrt().floor() as usize } else { 0 };
                while w < geometry.cols && reach(dr, w + 1) {
                    w += 1;
                }
                while w > 0 && !reach(dr, w) {
                    w -= 1;
                }
                if !reach(dr, w) {
                    continue;
                }
                let c_lo = cs.saturating_sub(w);
                let c_hi = (cs + w).min(geometry.cols - 1);
                let row = &table[r * width..(r + 1) * width];
                total += row[c_hi + 1] - row[c_lo];
            }
        }
        total
    }
}

/// The member of `candidates` with the largest width; ties go to the lowest id.
pub fn acquisition_target(candidates: &StateSet, widths: &[f64]) -> Option<StateId> {
    let mut best: Option<(StateId, f64)> = None;
    for s in candidates.iter() {
        let w = widths[s.0];
        match best {
            Some((_, bw)) if !(w > bw) => {}
            _ => best = Some((s, w)),
        }
    }
    best.map(|(s, _)| s)
}

impl SafeSets {
    /// Runs the full classification step.
    pub fn classify(
        mdp: &Mdp,
        bands: &ConfidenceBands,
        prev_ergodic: &StateSet,
        h: f64,
        mode: ClassifierMode,
        expander_lipschitz: f64,
    ) -> Result<Self> {
        let safe = classify_safe(mdp, bands, prev_ergodic, h, mode);
        let ergodic = ergodic_safe(mdp, &safe, prev_ergodic)?;
        Ok(Self::from_parts(mdp, bands, safe, ergodic, expander_lipschitz, h))
    }

    /// Completes a classification from given safe and ergodic sets.
    pub fn from_parts(
        mdp: &Mdp,
        bands: &ConfidenceBands,
        safe: StateSet,
        ergodic: StateSet,
        expander_lipschitz: f64,
        h: f64,
    ) -> Self {
        let (expanders, expander_counts) = expanders(mdp, &ergodic, &safe, bands, expander_lipschitz, h);
        Self { safe, ergodic, expanders, expander_counts, widths: bands.widths() }
    }
}
