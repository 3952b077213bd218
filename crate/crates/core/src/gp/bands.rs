use sha2::{Digest, Sha256};

use crate::reach::StateSet;

/// Running intersection of GP confidence intervals, one per state.
///
/// `lower` never decreases and `upper` never increases across updates.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfidenceBands {
    lower: Vec<f64>,
    upper: Vec<f64>,
    collapses: usize,
}

impl ConfidenceBands {
    /// `[h, ∞)` on the seed states, the whole real line elsewhere.
    pub fn initial(num_states: usize, seed: &StateSet, h: f64) -> Self {
        let mut lower = vec![f64::NEG_INFINITY; num_states];
        for s in seed.iter() {
            lower[s.0] = h;
        }
        Self { lower, upper: vec![f64::INFINITY; num_states], collapses: 0 }
    }

    /// Bands from explicit bounds. Panics if lengths differ.
    pub fn from_bounds(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        Self { lower, upper, collapses: 0 }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, s: usize) -> f64 {
        self.upper[s] - self.lower[s]
    }

    pub fn widths(&self) -> Vec<f64> {
        (0..self.len()).map(|s| self.width(s)).collect()
    }

    /// Number of empty intersections resolved so far.
    pub fn collapses(&self) -> usize {
        self.collapses
    }

    /// Stable 64-bit digest of the bounds.
    pub fn digest(&self) -> u64 {
        let mut hasher = Sha256::new();
        for (l, u) in self.lower.iter().zip(&self.upper) {
            hasher.update(l.to_bits().to_le_bytes());
            hasher.update(u.to_bits().to_le_bytes());
        }
        let out = hasher.finalize();
        u64::from_le_bytes(out[..8].try_into().expect("sha256 digest has 32 bytes"))
    }
}

/// Intersects the previous bands with `μ ± √β σ`.
///
/// When an intersection is empty the state collapses to the midpoint of the
/// crossed bounds, clamped into the previous interval so that the bands stay
/// monotone, and the collapse counter is incremented.
pub fn update_bands(prev: &ConfidenceBands, means: &[f64], variances: &[f64], beta_t: f64) -> ConfidenceBands {
    assert_eq!(means.len(), prev.len());
    assert_eq!(variances.len(), prev.len());
    let scale = beta_t.sqrt();
    let mut next = prev.clone();
    for s in 0..prev.len() {
        let half = scale * variances[s].max(0.0).sqrt();
        let lo = prev.lower[s].max(means[s] - half);
        let hi = prev.upper[s].min(means[s] + half);
        if lo <= hi {
            next.lower[s] = lo;
            next.upper[s] = hi;
        } else {
            let mid = (0.5 * (lo + hi)).clamp(prev.lower[s], prev.upper[s]);
            next.lower[s] = mid;
            next.upper[s] = mid;
            next.collapses += 1;
        }
    }
    next
}
