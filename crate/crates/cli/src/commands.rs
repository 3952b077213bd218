//! Subcommand implementations.

use std::path::{Path, PathBuf};

use anyhow::Context;

use safemdp::terrain::{synth_terrain, write_esri_ascii, CraterHillParams, TerrainKind};
use safemdp::Kernel;

use crate::experiment::{Experiment, SeedRun};
use crate::output;
use crate::{CliError, ExperimentConfig, OUTPUT_ENV};

/// Output root: the environment override if set, otherwise `[output] dir`
/// relative to the working directory.
pub fn output_root(config: &ExperimentConfig, env_override: Option<PathBuf>) -> PathBuf {
    env_override.unwrap_or_else(|| config.output.dir.clone())
}

fn env_root() -> Option<PathBuf> {
    std::env::var_os(OUTPUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn explore(config_path: &Path) -> Result<Vec<SeedRun>, CliError> {
    let loaded = ExperimentConfig::load(config_path)?;
    let exp = Experiment::from_loaded(&loaded)?;
    let root = output_root(&exp.config, env_root());
    let runs = exp.run_all()?;
    for run in &runs {
        output::write_seed(&exp, run, &root)?;
    }
    output::write_summary(&runs, &root)?;
    Ok(runs)
}

pub fn oracle(config_path: &Path) -> Result<Experiment, CliError> {
    let loaded = ExperimentConfig::load(config_path)?;
    let exp = Experiment::from_loaded(&loaded)?;
    output::write_oracle(&exp, &output_root(&exp.config, env_root()))?;
    Ok(exp)
}

/// Parameters of the `synth` subcommand.
#[derive(Clone, Debug)]
pub struct SynthArgs {
    pub gp_sample: bool,
    pub rows: usize,
    pub cols: usize,
    pub cell_size: f64,
    pub seed: u64,
    pub lengthscale: f64,
    pub prior_std: f64,
    pub hill_radius: Option<f64>,
    pub hill_amplitude: Option<f64>,
    pub crater_radius: Option<f64>,
    pub crater_depth: Option<f64>,
    pub out: PathBuf,
}

pub fn synth(args: &SynthArgs) -> Result<(), CliError> {
    if args.rows == 0 || args.cols == 0 || !(args.cell_size > 0.0) {
        return Err(CliError::Config("rows, cols and cell size must be positive".into()));
    }
    let kind = if args.gp_sample {
        let kernel = Kernel::matern52(args.lengthscale, args.prior_std).map_err(|e| CliError::Config(e.to_string()))?;
        TerrainKind::GpSample { kernel, seed: args.seed }
    } else {
        let mut params = CraterHillParams::default_for(args.rows, args.cols);
        params.hill.radius = args.hill_radius.unwrap_or(params.hill.radius);
        params.hill.amplitude = args.hill_amplitude.unwrap_or(params.hill.amplitude);
        params.crater.radius = args.crater_radius.unwrap_or(params.crater.radius);
        params.crater.amplitude = args.crater_depth.unwrap_or(params.crater.amplitude);
        TerrainKind::CraterHill { params }
    };
    let grid =
        synth_terrain(&kind, args.rows, args.cols, args.cell_size).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let file = std::fs::File::create(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    write_esri_ascii(&grid, std::io::BufWriter::new(file))
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    Ok(())
}
