use std::sync::Arc;

use super::TerrainGrid;
use crate::error::{Error, Result};
use crate::explorer::{Environment, GpBelief, SafetyBelief};
use crate::gp::{
    update_bands, ConfidenceBands, Covariance, DifferenceCovariance, GpModel, Kernel, PosteriorTracker,
    StationaryCovariance,
};
use crate::mdp::{augment, masked_grid_mdp, AugmentedMdp, AugmentedState, GridLayout, Mdp, StateId};
use crate::reach::StateSet;

/// Original grid states carry the value `h + ORIGINAL_STATE_MARGIN`, far
/// above the threshold, so only transitions can be unsafe.
pub const ORIGINAL_STATE_MARGIN: f64 = 1e6;

/// Slope limits of the rover.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TerrainSafetySpec {
    pub max_slope_deg: f64,
    /// Slope used for the threshold; at most `max_slope_deg`.
    pub conservative_slope_deg: f64,
}

impl Default for TerrainSafetySpec {
    fn default() -> Self {
        Self { max_slope_deg: 30.0, conservative_slope_deg: 25.0 }
    }
}

impl TerrainSafetySpec {
    pub fn new(max_slope_deg: f64, conservative_slope_deg: f64) -> Result<Self> {
        let spec = Self { max_slope_deg, conservative_slope_deg };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let in_range = |a: f64| a > 0.0 && a < 90.0;
        if !in_range(self.max_slope_deg) || !in_range(self.conservative_slope_deg) {
            return Err(Error::InvalidParameter("slope limits must lie strictly between 0 and 90 degrees".into()));
        }
        if self.conservative_slope_deg > self.max_slope_deg {
            return Err(Error::InvalidParameter(format!(
                "conservative slope {} exceeds maximum slope {}",
                self.conservative_slope_deg, self.max_slope_deg
            )));
        }
        Ok(())
    }

    /// `h = -d tan(α)` for cell size `d` and the conservative slope `α`.
    pub fn threshold(&self, cell_size: f64) -> f64 {
        -cell_size * self.conservative_slope_deg.to_radians().tan()
    }
}

/// A terrain grid turned into an augmented MDP with a simulated environment.
#[derive(Clone, Debug)]
pub struct TerrainEnvironment {
    pub grid: TerrainGrid,
    pub layout: GridLayout,
    pub aug: AugmentedMdp,
    pub env: Environment,
    pub h: f64,
    /// Height of every base state.
    heights: Vec<f64>,
    /// Exactly known safety values: original states and `stay` transitions.
    known: Vec<Option<f64>>,
    /// `(source, successor)` base states of every action-state.
    pairs: Vec<Option<(usize, usize)>>,
}

/// Builds the augmented grid MDP of the valid cells of `grid` and an
/// environment whose action-states have safety `H(s) - H(s')`.
pub fn build_terrain_environment(
    grid: TerrainGrid,
    spec: &TerrainSafetySpec,
    noise_std: f64,
    seed: u64,
) -> Result<TerrainEnvironment> {
    spec.validate()?;
    let h = spec.threshold(grid.cell_size);
    build_terrain_environment_with_threshold(grid, h, noise_std, seed)
}

/// [`build_terrain_environment`] with an explicit threshold `h`.
pub fn build_terrain_environment_with_threshold(
    grid: TerrainGrid,
    h: f64,
    noise_std: f64,
    seed: u64,
) -> Result<TerrainEnvironment> {
    if grid.num_valid() == 0 {
        return Err(Error::EmptyGrid);
    }
    let (base, layout) = masked_grid_mdp(grid.rows, grid.cols, grid.cell_size, |r, c| grid.is_valid(r, c));
    let heights: Vec<f64> = layout.cells.iter().map(|&(r, c)| grid.heights[grid.index(r, c)]).collect();
    let aug = augment(&base);
    let n = aug.num_states();
    let mut truth = Vec::with_capacity(n);
    let mut known = Vec::with_capacity(n);
    let mut pairs = Vec::with_capacity(n);
    for s in 0..n {
        match aug.transition_of(StateId(s)) {
            None => {
                let v = h + ORIGINAL_STATE_MARGIN;
                truth.push(v);
                known.push(Some(v));
                pairs.push(None);
            }
            Some((src, next)) => {
                truth.push(heights[src.0] - heights[next.0]);
                known.push((src == next).then_some(0.0));
                pairs.push(Some((src.0, next.0)));
            }
        }
    }
    let env = Environment::new(truth, h, noise_std, seed)?.with_heights(heights.clone());
    Ok(TerrainEnvironment { grid, layout, aug, env, h, heights, known, pairs })
}

impl TerrainEnvironment {
    /// The augmented MDP the explorer runs on.
    pub fn mdp(&self) -> &Mdp {
        self.aug.mdp()
    }

    pub fn base(&self) -> &Mdp {
        self.aug.base()
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn known(&self) -> &[Option<f64>] {
        &self.known
    }

    pub fn pairs(&self) -> &[Option<(usize, usize)>] {
        &self.pairs
    }

    pub fn true_safety(&self) -> &[f64] {
        self.env.true_safety()
    }

    /// Augmented id of the grid cell `(row, col)`, if the cell is valid.
    pub fn cell_state(&self, row: usize, col: usize) -> Option<StateId> {
        // original states keep their base ids in the augmented MDP
        self.layout.state_at(row, col)
    }

    /// Cells within Chebyshev distance `radius` of `(row, col)`, together
    /// with every transition between them.
    pub fn seed_block(&self, row: usize, col: usize, radius: usize) -> Result<StateSet> {
        let n = self.aug.num_states();
        let mut cells = StateSet::empty(self.base().num_states());
        for r in row.saturating_sub(radius)..=(row + radius).min(self.grid.rows - 1) {
            for c in col.saturating_sub(radius)..=(col + radius).min(self.grid.cols - 1) {
                if let Some(s) = self.layout.state_at(r, c) {
                    cells.insert(s);
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::Config(format!("no valid cell within {radius} of ({row}, {col})")));
        }
        let mut seed = StateSet::empty(n);
        for s in 0..n {
            let keep = match self.aug.original_of(StateId(s)) {
                AugmentedState::Original(b) => cells.contains(b),
                AugmentedState::ActionState(..) => {
                    let (src, next) = self.aug.transition_of(StateId(s)).expect("action-state");
                    cells.contains(src) && cells.contains(next)
                }
            };
            if keep {
                seed.insert(StateId(s));
            }
        }
        Ok(seed)
    }

    /// Base-state transitions `(s, s')` with `H(s) - H(s') < h`.
    pub fn unsafe_transitions(&self) -> Vec<(StateId, StateId)> {
        self.aug
            .action_state_ids()
            .filter(|&s| !self.env.is_safe(s))
            .map(|s| self.aug.transition_of(s).expect("action-state"))
            .collect()
    }

    /// Stationary kernel over the base grid.
    pub fn height_covariance(&self, kernel: Kernel) -> Arc<dyn Covariance> {
        Arc::new(StationaryCovariance::new(kernel, self.base().metric().clone()))
    }

    /// Covariance of height differences over the augmented states.
    pub fn difference_covariance(&self, kernel: Kernel) -> Arc<dyn Covariance> {
        Arc::new(DifferenceCovariance::new(self.height_covariance(kernel), self.pairs.clone()))
    }

    /// GP over action-states with the difference kernel.
    pub fn difference_belief(&self, kernel: Kernel, noise_std: f64) -> Result<GpBelief> {
        GpBelief::with_known(self.difference_covariance(kernel), noise_std, self.known.clone())
    }

    /// GP over heights; differences are derived from it.
    pub fn height_belief(&self, kernel: Kernel, noise_std: f64) -> Result<HeightBelief> {
        let model = GpModel::new(self.height_covariance(kernel), noise_std)?;
        let tracker = PosteriorTracker::new(&model, (0..self.heights.len()).collect());
        Ok(HeightBelief { model, tracker, known: self.known.clone(), pairs: self.pairs.clone() })
    }
}

/// Posterior of the height differences of every action-state under a GP
/// over base-cell heights. Known states get their value and zero variance.
/// Variances are returned before clamping.
pub fn difference_posterior(
    height_gp: &GpModel,
    pairs: &[Option<(usize, usize)>],
    known: &[Option<f64>],
) -> (Vec<f64>, Vec<f64>) {
    pairs
        .iter()
        .zip(known)
        .map(|(pair, value)| match (value, pair) {
            (Some(v), _) => (*v, 0.0),
            (None, Some((u, v))) => {
                let (m, var) = height_gp.posterior(&[*u, *v]);
                let cov = height_gp.posterior_cov(*u, *v);
                let raw_u = height_gp.posterior_cov(*u, *u);
                let raw_v = height_gp.posterior_cov(*v, *v);
                debug_assert!(var.iter().all(|x| *x >= 0.0));
                (m[0] - m[1], raw_u + raw_v - 2.0 * cov)
            }
            (None, None) => (0.0, 0.0),
        })
        .unzip()
}

/// Confidence bands of height differences induced by a height GP,
/// intersected with `prev`.
pub fn height_gp_to_difference_bands(
    height_gp: &GpModel,
    terrain: &TerrainEnvironment,
    beta_t: f64,
    prev: &ConfidenceBands,
) -> ConfidenceBands {
    let (means, vars) = difference_posterior(height_gp, &terrain.pairs, &terrain.known);
    let vars: Vec<f64> = vars.into_iter().map(|v| v.max(0.0)).collect();
    update_bands(prev, &means, &vars, beta_t)
}

/// Belief that models heights and measures both endpoints of a transition.
#[derive(Clone, Debug)]
pub struct HeightBelief {
    model: GpModel,
    tracker: PosteriorTracker,
    known: Vec<Option<f64>>,
    pairs: Vec<Option<(usize, usize)>>,
}

impl HeightBelief {
    pub fn model(&self) -> &GpModel {
        &self.model
    }
}

impl SafetyBelief for HeightBelief {
    fn num_states(&self) -> usize {
        self.known.len()
    }

    fn posterior(&self) -> (Vec<f64>, Vec<f64>) {
        let mean = self.tracker.means();
        let var = self.tracker.raw_variances();
        self.pairs
            .iter()
            .zip(&self.known)
            .map(|(pair, value)| match (value, pair) {
                (Some(v), _) => (*v, 0.0),
                (None, Some((u, v))) => {
                    let cov = self.tracker.covariance(&self.model, *u, *v);
                    (mean[*u] - mean[*v], (var[*u] + var[*v] - 2.0 * cov).max(0.0))
                }
                (None, None) => (0.0, 0.0),
            })
            .unzip()
    }

    fn observe(&mut self, state: StateId, env: &mut Environment) -> Result<f64> {
        if state.0 >= self.known.len() {
            return Err(Error::UnknownState(state));
        }
        match self.pairs[state.0] {
            Some((u, v)) if u != v => {
                let yu = env.measure_height(u);
                let yv = env.measure_height(v);
                self.model.observe(u, yu)?;
                self.model.observe(v, yv)?;
                self.tracker.sync(&self.model);
                Ok(yu - yv)
            }
            _ => Ok(env.measure(state)),
        }
    }
}
