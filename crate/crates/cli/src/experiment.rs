//! Building terrain experiments from a configuration and running them.

use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;

use safemdp::reach::{r_eps_fixpoint_with, SafetyParams};
use safemdp::terrain::{
    build_terrain_environment_with_threshold, load_esri_ascii, synth_terrain, CraterHillParams, Feature,
    TerrainEnvironment, TerrainGrid, TerrainKind, TerrainSafetySpec,
};
use safemdp::{
    run_strategy, BetaSchedule, ClassifierMode, Environment, Error, ExplorationTrace, ExplorerConfig, Kernel,
    SafetyBelief, StateSet, Strategy, TerminalReason,
};

use crate::config::{BeliefName, ExperimentConfig, KernelName, LoadedConfig, NumberOr, SynthKind, TerrainSource};
use crate::CliError;

/// Maps library errors caused by bad parameters to configuration errors.
fn classify(e: Error) -> CliError {
    match e {
        Error::Config(m) | Error::InvalidParameter(m) => CliError::Config(m),
        Error::EmptyGrid | Error::SizeLimit { .. } => CliError::Config(e.to_string()),
        other => CliError::Runtime(other.into()),
    }
}

/// Summary of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    pub strategy: Strategy,
    pub seed: u64,
    /// `|Ŝ ∩ R̄_ε(S₀)| / |R̄_ε(S₀)|` for the terminal ergodic set `Ŝ`.
    pub coverage_fraction: Option<f64>,
    /// Movement step `k` of the first unsafe visit.
    pub violation_step: Option<usize>,
    pub iterations: usize,
    pub agent_steps: usize,
    pub terminal: TerminalReason,
    pub oracle_size: usize,
    pub ergodic_size: usize,
    pub safe_size: usize,
    pub band_collapses: usize,
}

/// One finished run.
#[derive(Clone, Debug)]
pub struct SeedRun {
    pub seed: u64,
    pub trace: ExplorationTrace,
    pub metrics: Metrics,
}

/// A terrain, its seed set and oracle sets, ready to be explored.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub terrain: TerrainEnvironment,
    pub seed_set: StateSet,
    /// `R̄_ε(S₀)` computed from the true safety values.
    pub oracle: StateSet,
    /// `R̄_0(S₀)`.
    pub oracle_zero: StateSet,
    pub kernel: Kernel,
    pub explorer: ExplorerConfig,
}

/// Loads or generates the elevation grid described by the configuration.
pub fn build_grid(config: &ExperimentConfig, base_dir: &Path) -> Result<TerrainGrid, CliError> {
    let t = &config.terrain;
    match t.source {
        TerrainSource::Dem => {
            let path = base_dir.join(t.path.as_ref().expect("validated"));
            let file = std::fs::File::open(&path)
                .with_context(|| format!("cannot open elevation grid {}", path.display()))
                .map_err(CliError::Runtime)?;
            load_esri_ascii(std::io::BufReader::new(file))
                .with_context(|| format!("cannot read elevation grid {}", path.display()))
                .map_err(CliError::Runtime)
        }
        TerrainSource::Synth => {
            let (rows, cols) = (t.rows.expect("validated"), t.cols.expect("validated"));
            let kind = match t.kind {
                SynthKind::CraterHill => {
                    let mut params = CraterHillParams::default_for(rows, cols);
                    params.slope = (t.slope_row, t.slope_col);
                    apply_feature(&mut params.hill, t.hill_row, t.hill_col, t.hill_radius, t.hill_amplitude);
                    apply_feature(&mut params.crater, t.crater_row, t.crater_col, t.crater_radius, t.crater_depth);
                    TerrainKind::CraterHill { params }
                }
                SynthKind::GpSample => {
                    let kernel = make_kernel(
                        config.gp.kernel,
                        t.sample_lengthscale.unwrap_or(config.gp.lengthscale),
                        t.sample_std.unwrap_or(config.gp.prior_std),
                    )?;
                    TerrainKind::GpSample { kernel, seed: t.sample_seed }
                }
            };
            synth_terrain(&kind, rows, cols, t.cell_size).map_err(classify)
        }
    }
}

fn apply_feature(f: &mut Feature, row: Option<f64>, col: Option<f64>, radius: Option<f64>, amplitude: Option<f64>) {
    f.center = (row.unwrap_or(f.center.0), col.unwrap_or(f.center.1));
    f.radius = radius.unwrap_or(f.radius);
    f.amplitude = amplitude.unwrap_or(f.amplitude);
}

fn make_kernel(name: KernelName, lengthscale: f64, prior_std: f64) -> Result<Kernel, CliError> {
    match name {
        KernelName::Matern52 => Kernel::matern52(lengthscale, prior_std),
        KernelName::SquaredExponential => Kernel::squared_exponential(lengthscale, prior_std),
    }
    .map_err(classify)
}

fn beta_schedule(config: &ExperimentConfig) -> Result<BetaSchedule, CliError> {
    let e = &config.explorer;
    match &e.beta {
        NumberOr::Number(b) => BetaSchedule::constant(*b).map_err(classify),
        NumberOr::Keyword(_) => {
            let gamma = e.gamma.clone().expect("validated");
            BetaSchedule::theoretical(e.rkhs_bound.expect("validated"), e.delta.expect("validated"), move |t| {
                let i = (t as usize).saturating_sub(1).min(gamma.len() - 1);
                gamma[i]
            })
            .map_err(classify)
        }
    }
}

impl Experiment {
    pub fn from_loaded(loaded: &LoadedConfig) -> Result<Self, CliError> {
        Self::new(loaded.config.clone(), &loaded.base_dir)
    }

    pub fn new(config: ExperimentConfig, base_dir: &Path) -> Result<Self, CliError> {
        config.validate()?;
        let grid = build_grid(&config, base_dir)?;
        let s = &config.safety;
        let spec = TerrainSafetySpec::new(s.max_slope_deg, s.conservative_slope_deg).map_err(classify)?;
        let h = match s.h {
            NumberOr::Number(h) => h,
            NumberOr::Keyword(_) => spec.threshold(grid.cell_size),
        };
        let terrain = build_terrain_environment_with_threshold(grid, h, config.gp.noise_std, 0).map_err(classify)?;
        let seed_set = terrain.seed_block(s.seed_row, s.seed_col, s.seed_radius).map_err(classify)?;
        if let Some(bad) = seed_set.iter().find(|&q| !terrain.env.is_safe(q)) {
            return Err(CliError::Config(format!(
                "seed block around ({}, {}) contains state {bad} whose true safety value is below h",
                s.seed_row, s.seed_col
            )));
        }
        let kernel = make_kernel(config.gp.kernel, config.gp.lengthscale, config.gp.prior_std)?;
        let e = &config.explorer;
        let mut explorer = ExplorerConfig::new(
            seed_set.clone(),
            beta_schedule(&config)?,
            ClassifierMode::GpDirect,
            e.lipschitz,
            e.epsilon,
        )
        .with_max_iterations(e.max_iterations);
        explorer.measure_along_path = e.measure_along_path;
        explorer.validate(terrain.mdp()).map_err(classify)?;
        let oracle = oracle_set(&terrain, &seed_set, e.epsilon);
        let oracle_zero = oracle_set(&terrain, &seed_set, 0.0);
        Ok(Self { config, terrain, seed_set, oracle, oracle_zero, kernel, explorer })
    }

    /// Seeded copy of the simulated environment.
    pub fn environment(&self, seed: u64) -> Result<Environment, CliError> {
        let env = &self.terrain.env;
        Ok(Environment::new(env.true_safety().to_vec(), env.threshold(), env.noise_std(), seed)
            .map_err(classify)?
            .with_heights(self.terrain.heights().to_vec()))
    }

    fn belief(&self) -> Result<Box<dyn SafetyBelief>, CliError> {
        let noise = self.config.gp.noise_std;
        Ok(match self.config.gp.belief {
            BeliefName::Difference => Box::new(self.terrain.difference_belief(self.kernel, noise).map_err(classify)?),
            BeliefName::Heights => Box::new(self.terrain.height_belief(self.kernel, noise).map_err(classify)?),
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.config.strategy().expect("validated")
    }

    /// Runs the configured strategy with one seed.
    pub fn run_seed(&self, seed: u64) -> Result<SeedRun, CliError> {
        self.run_with(self.strategy(), seed)
    }

    pub fn run_with(&self, strategy: Strategy, seed: u64) -> Result<SeedRun, CliError> {
        let mut env = self.environment(seed)?;
        let mut belief = self.belief()?;
        let trace =
            run_strategy(strategy, self.terrain.mdp(), &mut env, belief.as_mut(), &self.explorer).map_err(classify)?;
        let metrics = self.metrics(seed, &trace);
        Ok(SeedRun { seed, trace, metrics })
    }

    /// Runs every configured seed in parallel, in seed-list order.
    pub fn run_all(&self) -> Result<Vec<SeedRun>, CliError> {
        self.config.explorer.seeds.par_iter().map(|&seed| self.run_seed(seed)).collect()
    }

    pub fn metrics(&self, seed: u64, trace: &ExplorationTrace) -> Metrics {
        let ergodic = &trace.final_sets.ergodic;
        let covered = ergodic.intersection(&self.oracle).len();
        Metrics {
            strategy: trace.strategy,
            seed,
            coverage_fraction: (!self.oracle.is_empty()).then(|| covered as f64 / self.oracle.len() as f64),
            violation_step: trace.terminal.violation_step(),
            iterations: trace.iterations(),
            agent_steps: trace.agent_steps,
            terminal: trace.terminal,
            oracle_size: self.oracle.len(),
            ergodic_size: ergodic.len(),
            safe_size: trace.final_sets.safe.len(),
            band_collapses: trace.band_collapses,
        }
    }
}

/// `R̄_ε(S₀)` from the true safety values, with states certified from their
/// own value as in the GP-direct classifier.
pub fn oracle_set(terrain: &TerrainEnvironment, seed_set: &StateSet, eps: f64) -> StateSet {
    let params = SafetyParams::pointwise(terrain.true_safety(), eps, terrain.h);
    r_eps_fixpoint_with(terrain.mdp(), seed_set, &params).set
}
