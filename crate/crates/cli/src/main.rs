use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use safemdp_cli::commands::{self, SynthArgs};

#[derive(Parser)]
#[command(name = "safemdp", version, about = "Safe exploration of terrain with Gaussian-process safety constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    CraterHill,
    GpSample,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured strategy for every seed.
    Explore { config: PathBuf },
    /// Write the safely explorable sets of the true terrain.
    Oracle { config: PathBuf },
    /// Write a synthetic elevation grid as ESRI ASCII.
    Synth {
        #[arg(long, value_enum, default_value = "crater-hill")]
        kind: Kind,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 1.0)]
        cell_size: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 14.5)]
        lengthscale: f64,
        #[arg(long, default_value_t = 10.0)]
        prior_std: f64,
        #[arg(long)]
        hill_radius: Option<f64>,
        #[arg(long)]
        hill_amplitude: Option<f64>,
        #[arg(long)]
        crater_radius: Option<f64>,
        #[arg(long)]
        crater_depth: Option<f64>,
        #[arg(long, short)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Explore { config } => commands::explore(&config).map(|runs| {
            for run in runs {
                let m = run.metrics;
                let coverage = m.coverage_fraction.map_or("-".into(), |c| format!("{c:.3}"));
                println!("seed {}: {} after {} iterations, coverage {coverage}", m.seed, m.terminal, m.iterations);
            }
        }),
        Command::Oracle { config } => commands::oracle(&config)
            .map(|exp| println!("oracle: {} states (eps), {} states (zero)", exp.oracle.len(), exp.oracle_zero.len())),
        Command::Synth {
            kind,
            rows,
            cols,
            cell_size,
            seed,
            lengthscale,
            prior_std,
            hill_radius,
            hill_amplitude,
            crater_radius,
            crater_depth,
            out,
        } => commands::synth(&SynthArgs {
            gp_sample: matches!(kind, Kind::GpSample),
            rows,
            cols,
            cell_size,
            seed,
            lengthscale,
            prior_std,
            hill_radius,
            hill_amplitude,
            crater_radius,
            crater_depth,
            out,
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
