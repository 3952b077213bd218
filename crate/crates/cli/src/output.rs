//! Run artifacts.
//!
//! Per seed, `explore` writes into `seed-<n>/`:
//!
//! - `trace.csv`: `t,target,width,path_length,observation,safe_size,ergodic_size,expander_size`,
//!   one row per measurement iteration.
//! - `snapshots.csv`: `t,safe,ergodic,expanders`, membership bitstrings indexed
//!   by state id. The last row, numbered one past the final iteration, is the
//!   classification the run stopped with.
//! - `metrics.txt`: `key: value` lines, see [`METRIC_KEYS`]. Absent values are empty.
//! - `manifest.toml`: the fully resolved configuration and the seed.
//!
//! The output root also receives `summary.csv` with one row per seed.
//! `oracle` writes `oracle.csv`: `state,kind,row,col,next_row,next_col,safety,r_eps,r_zero`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::experiment::{Experiment, Metrics, SeedRun};

pub const TRACE_HEADER: &str = "t,target,width,path_length,observation,safe_size,ergodic_size,expander_size";
pub const SNAPSHOT_HEADER: &str = "t,safe,ergodic,expanders";
pub const SUMMARY_HEADER: &str =
    "seed,strategy,coverage_fraction,violation_step,iterations,agent_steps,terminal_reason";
pub const ORACLE_HEADER: &str = "state,kind,row,col,next_row,next_col,safety,r_eps,r_zero";
pub const METRIC_KEYS: [&str; 11] = [
    "strategy",
    "seed",
    "coverage_fraction",
    "violation_step",
    "iterations",
    "agent_steps",
    "terminal_reason",
    "oracle_size",
    "ergodic_size",
    "safe_size",
    "band_collapses",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn trace_csv(run: &SeedRun) -> String {
    let mut out = format!("{TRACE_HEADER}\n");
    for r in &run.trace.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.t,
            r.target.0,
            r.width,
            r.path.hops(),
            r.observation,
            r.sets.safe.len(),
            r.sets.ergodic.len(),
            r.sets.expanders.len()
        )
        .unwrap();
    }
    out
}

pub fn snapshots_csv(run: &SeedRun) -> String {
    let mut out = format!("{SNAPSHOT_HEADER}\n");
    for (i, sets) in run.trace.snapshots().enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            sets.safe.to_bitstring(),
            sets.ergodic.to_bitstring(),
            sets.expanders.to_bitstring()
        )
        .unwrap();
    }
    out
}

pub fn metrics_txt(m: &Metrics) -> String {
    let values = [
        m.strategy.to_string(),
        m.seed.to_string(),
        opt(m.coverage_fraction),
        opt(m.violation_step),
        m.iterations.to_string(),
        m.agent_steps.to_string(),
        m.terminal.label().to_string(),
        m.oracle_size.to_string(),
        m.ergodic_size.to_string(),
        m.safe_size.to_string(),
        m.band_collapses.to_string(),
    ];
    METRIC_KEYS.iter().zip(values).map(|(k, v)| format!("{k}: {v}\n")).collect()
}

/// Parses a `metrics.txt` body into `(key, value)` pairs.
pub fn parse_metrics(text: &str) -> Vec<(String, String)> {
    text.lines().filter_map(|l| l.split_once(':')).map(|(k, v)| (k.trim().to_string(), v.trim().to_string())).collect()
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'a str,
    seed: u64,
    threshold: f64,
    seed_states: usize,
    config: &'a ExperimentConfig,
}

pub fn manifest_toml(exp: &Experiment, seed: u64) -> Result<String> {
    let mut config = exp.config.clone();
    config.explorer.seeds = vec![seed];
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        seed,
        threshold: exp.terrain.h,
        seed_states: exp.seed_set.len(),
        config: &config,
    };
    toml::to_string(&manifest).context("cannot serialize run manifest")
}

pub fn summary_csv(runs: &[SeedRun]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for run in runs {
        let m = &run.metrics;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            m.seed,
            m.strategy,
            opt(m.coverage_fraction),
            opt(m.violation_step),
            m.iterations,
            m.agent_steps,
            m.terminal.label()
        )
        .unwrap();
    }
    out
}

pub fn oracle_csv(exp: &Experiment) -> String {
    let t = &exp.terrain;
    let cell = |s: usize| t.layout.cells[s];
    let mut out = format!("{ORACLE_HEADER}\n");
    for s in t.mdp().states() {
        let (kind, (r, c), next) = match t.aug.transition_of(s) {
            None => ("cell", cell(t.aug.original_state(s).0), None),
            Some((from, to)) => ("move", cell(from.0), Some(cell(to.0))),
        };
        writeln!(
            out,
            "{},{kind},{r},{c},{},{},{},{},{}",
            s.0,
            opt(next.map(|n| n.0)),
            opt(next.map(|n| n.1)),
            t.true_safety()[s.0],
            u8::from(exp.oracle.contains(s)),
            u8::from(exp.oracle_zero.contains(s)),
        )
        .unwrap();
    }
    out
}

fn write(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes the per-seed artifacts of `run` into `root/seed-<n>/`.
pub fn write_seed(exp: &Experiment, run: &SeedRun, root: &Path) -> Result<()> {
    let dir = root.join(format!("seed-{}", run.seed));
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    write(&dir.join("trace.csv"), &trace_csv(run))?;
    write(&dir.join("snapshots.csv"), &snapshots_csv(run))?;
    write(&dir.join("metrics.txt"), &metrics_txt(&run.metrics))?;
    write(&dir.join("manifest.toml"), &manifest_toml(exp, run.seed)?)
}

pub fn write_summary(runs: &[SeedRun], root: &Path) -> Result<()> {
    fs::create_dir_all(root).with_context(|| format!("cannot create {}", root.display()))?;
    write(&root.join("summary.csv"), &summary_csv(runs))
}

pub fn write_oracle(exp: &Experiment, root: &Path) -> Result<()> {
    fs::create_dir_all(root).with_context(|| format!("cannot create {}", root.display()))?;
    write(&root.join("oracle.csv"), &oracle_csv(exp))
}
