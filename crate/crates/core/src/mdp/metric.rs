use std::sync::Arc;

use super::StateId;

/// Distance function over the states of an MDP.
///
/// Metrics are stored as functions rather than dense `n x n` matrices; only
/// the explicit [`Metric::Table`] variant materializes distances.
#[derive(Clone, Debug)]
pub enum Metric {
    /// `0` on the diagonal, `1` elsewhere.
    Discrete,
    /// Euclidean distance between grid cells, scaled by the cell size.
    Grid { coords: Arc<[(usize, usize)]>, cell_size: f64 },
    /// Dense symmetric distance table, row-major.
    Table { n: usize, distances: Arc<[f64]> },
    /// Metric on an augmented MDP: every state is anchored at a base state
    /// and carries an offset, `d(x, y) = d_base(anchor x, anchor y) + off x + off y`
    /// for `x != y`.
    Augmented { base: Box<Metric>, anchors: Arc<[StateId]>, offsets: Arc<[f64]> },
}

impl Metric {
    pub fn distance(&self, a: StateId, b: StateId) -> f64 {
        if a == b {
            return 0.0;
        }
        match self {
            Metric::Discrete => 1.0,
            Metric::Grid { coords, cell_size } => {
                let (ra, ca) = coords[a.0];
                let (rb, cb) = coords[b.0];
                let (dr, dc) = (ra.abs_diff(rb) as f64, ca.abs_diff(cb) as f64);
                dr.hypot(dc) * cell_size
            }
            Metric::Table { n, distances } => distances[a.0 * n + b.0],
            Metric::Augmented { base, anchors, offsets } => {
                base.distance(anchors[a.0], anchors[b.0]) + offsets[a.0] + offsets[b.0]
            }
        }
    }

    /// Number of states the metric is defined on, when it is bounded.
    pub fn num_states(&self) -> Option<usize> {
        match self {
            Metric::Discrete => None,
            Metric::Grid { coords, .. } => Some(coords.len()),
            Metric::Table { n, .. } => Some(*n),
            Metric::Augmented { anchors, .. } => Some(anchors.len()),
        }
    }

    /// Characteristic step length: the cell size of a grid, `1` for the
    /// discrete metric, the smallest positive entry of a table.
    pub fn unit(&self) -> f64 {
        match self {
            Metric::Discrete => 1.0,
            Metric::Grid { cell_size, .. } => *cell_size,
            Metric::Table { distances, .. } => {
                let min = distances.iter().copied().filter(|&d| d > 0.0).fold(f64::INFINITY, f64::min);
                if min.is_finite() {
                    min
                } else {
                    1.0
                }
            }
            Metric::Augmented { base, .. } => base.unit(),
        }
    }
}
