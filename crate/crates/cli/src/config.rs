//! Experiment configuration files.
//!
//! A configuration is a TOML document with the sections `[terrain]`,
//! `[safety]`, `[gp]`, `[explorer]` and `[output]`. Every section is a flat
//! table; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub terrain: TerrainSection,
    pub safety: SafetySection,
    #[serde(default)]
    pub gp: GpSection,
    #[serde(default)]
    pub explorer: ExplorerSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerrainSource {
    Synth,
    Dem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthKind {
    CraterHill,
    GpSample,
}

/// Where the elevation grid comes from.
///
/// Feature centers are given in cells; omitted centers and features fall back
/// to a hill in the upper-left and a crater in the lower-right quadrant.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TerrainSection {
    pub source: TerrainSource,
    /// ESRI ASCII grid, relative to the configuration file.
    pub path: Option<PathBuf>,
    #[serde(default = "default_kind")]
    pub kind: SynthKind,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    #[serde(default = "one")]
    pub cell_size: f64,
    pub hill_row: Option<f64>,
    pub hill_col: Option<f64>,
    pub hill_radius: Option<f64>,
    pub hill_amplitude: Option<f64>,
    pub crater_row: Option<f64>,
    pub crater_col: Option<f64>,
    pub crater_radius: Option<f64>,
    pub crater_depth: Option<f64>,
    /// Gain per meter along rows and columns.
    #[serde(default)]
    pub slope_row: f64,
    #[serde(default)]
    pub slope_col: f64,
    pub sample_lengthscale: Option<f64>,
    pub sample_std: Option<f64>,
    #[serde(default)]
    pub sample_seed: u64,
}

/// A number, or a keyword.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum NumberOr {
    Number(f64),
    Keyword(String),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SafetySection {
    #[serde(default = "thirty")]
    pub max_slope_deg: f64,
    #[serde(default = "twenty_five")]
    pub conservative_slope_deg: f64,
    /// Safety threshold in meters, or `"derived"` for `-cell_size tan(conservative_slope_deg)`.
    pub h: NumberOr,
    pub seed_row: usize,
    pub seed_col: usize,
    #[serde(default = "one_usize")]
    pub seed_radius: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelName {
    Matern52,
    SquaredExponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BeliefName {
    /// GP over height differences with the induced difference kernel.
    Difference,
    /// GP over heights; each measurement observes both endpoint heights.
    Heights,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GpSection {
    #[serde(default = "default_kernel")]
    pub kernel: KernelName,
    #[serde(default = "default_lengthscale")]
    pub lengthscale: f64,
    #[serde(default = "default_prior_std")]
    pub prior_std: f64,
    /// Used both by the model and by the simulated sensor.
    #[serde(default = "default_noise")]
    pub noise_std: f64,
    #[serde(default = "default_belief")]
    pub belief: BeliefName,
}

impl Default for GpSection {
    fn default() -> Self {
        Self {
            kernel: default_kernel(),
            lengthscale: default_lengthscale(),
            prior_std: default_prior_std(),
            noise_std: default_noise(),
            belief: default_belief(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    GpDirect,
    Lipschitz,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExplorerSection {
    #[serde(default = "default_strategy")]
    pub strategy: String,
    /// A constant, or `"theoretical"` together with `rkhs_bound`, `delta` and `gamma`.
    #[serde(default = "default_beta")]
    pub beta: NumberOr,
    pub rkhs_bound: Option<f64>,
    pub delta: Option<f64>,
    /// Information capacity per measurement; the last entry is held.
    pub gamma: Option<Vec<f64>>,
    #[serde(default = "default_mode")]
    pub mode: ModeName,
    #[serde(default = "default_lipschitz")]
    pub lipschitz: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_iterations")]
    pub max_iterations: usize,
    #[serde(default)]
    pub measure_along_path: bool,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
}

impl Default for ExplorerSection {
    fn default() -> Self {
        Self {
            strategy: default_strategy(),
            beta: default_beta(),
            rkhs_bound: None,
            delta: None,
            gamma: None,
            mode: default_mode(),
            lipschitz: default_lipschitz(),
            epsilon: default_epsilon(),
            max_iterations: default_iterations(),
            measure_along_path: false,
            seeds: default_seeds(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_out")]
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: default_out() }
    }
}

fn default_kind() -> SynthKind {
    SynthKind::CraterHill
}
fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn thirty() -> f64 {
    30.0
}
fn twenty_five() -> f64 {
    25.0
}
fn default_kernel() -> KernelName {
    KernelName::Matern52
}
fn default_lengthscale() -> f64 {
    14.5
}
fn default_prior_std() -> f64 {
    10.0
}
fn default_noise() -> f64 {
    0.075
}
fn default_belief() -> BeliefName {
    BeliefName::Difference
}
fn default_strategy() -> String {
    "safemdp".into()
}
fn default_beta() -> NumberOr {
    NumberOr::Number(2.0)
}
fn default_mode() -> ModeName {
    ModeName::GpDirect
}
fn default_lipschitz() -> f64 {
    0.1
}
fn default_epsilon() -> f64 {
    0.15
}
fn default_iterations() -> usize {
    525
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// A parsed configuration together with the directory relative paths refer to.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub base_dir: PathBuf,
}

impl ExperimentConfig {
    /// Parses and validates a configuration document.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<LoadedConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config = Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(LoadedConfig { config, base_dir })
    }

    /// Checks everything that can be checked without building the terrain.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        let t = &self.terrain;
        match t.source {
            TerrainSource::Dem if t.path.is_none() => {
                return bad("terrain.path is required for source = \"dem\"".into())
            }
            TerrainSource::Synth if t.rows.unwrap_or(0) == 0 || t.cols.unwrap_or(0) == 0 => {
                return bad("terrain.rows and terrain.cols must be positive for source = \"synth\"".into());
            }
            _ => {}
        }
        if !(t.cell_size > 0.0 && t.cell_size.is_finite()) {
            return bad(format!("terrain.cell_size must be positive, got {}", t.cell_size));
        }
        for (name, v) in [("terrain.hill_radius", t.hill_radius), ("terrain.crater_radius", t.crater_radius)] {
            if matches!(v, Some(r) if !(r > 0.0)) {
                return bad(format!("{name} must be positive"));
            }
        }
        self.threshold_keyword()?;
        if let NumberOr::Number(h) = self.safety.h {
            if !h.is_finite() {
                return bad("safety.h must be finite".into());
            }
        }
        self.strategy()?;
        if self.explorer.mode == ModeName::Lipschitz {
            return bad(
                "explorer.mode = \"lipschitz\" is not supported on terrain: original states carry a sentinel safety \
                 value that would certify every transition; use \"gp-direct\""
                    .into(),
            );
        }
        if !(self.gp.lengthscale > 0.0 && self.gp.prior_std > 0.0 && self.gp.noise_std > 0.0) {
            return bad("gp.lengthscale, gp.prior_std and gp.noise_std must be positive".into());
        }
        let e = &self.explorer;
        if !(e.lipschitz > 0.0 && e.epsilon > 0.0) {
            return bad("explorer.lipschitz and explorer.epsilon must be positive".into());
        }
        if e.max_iterations == 0 {
            return bad("explorer.max_iterations must be positive".into());
        }
        if e.seeds.is_empty() {
            return bad("explorer.seeds must not be empty".into());
        }
        match &e.beta {
            NumberOr::Number(b) if !(*b > 0.0 && b.is_finite()) => {
                return bad(format!("explorer.beta must be positive, got {b}"))
            }
            NumberOr::Number(_) => {}
            NumberOr::Keyword(k) if k == "theoretical" => {
                if e.rkhs_bound.is_none() || e.delta.is_none() || e.gamma.as_ref().map_or(true, |g| g.is_empty()) {
                    return bad(
                        "explorer.beta = \"theoretical\" needs rkhs_bound, delta and a nonempty gamma list".into()
                    );
                }
            }
            NumberOr::Keyword(k) => {
                return bad(format!("explorer.beta must be a number or \"theoretical\", got \"{k}\""))
            }
        }
        Ok(())
    }

    fn threshold_keyword(&self) -> Result<(), CliError> {
        match &self.safety.h {
            NumberOr::Keyword(k) if k != "derived" => {
                Err(CliError::Config(format!("safety.h must be a number or \"derived\", got \"{k}\"")))
            }
            _ => Ok(()),
        }
    }

    pub fn strategy(&self) -> Result<safemdp::Strategy, CliError> {
        self.explorer.strategy.parse().map_err(|e: String| {
            CliError::Config(format!(
                "explorer.strategy: {e} (expected safemdp, no-expanders, non-ergodic, unsafe or random)"
            ))
        })
    }
}
