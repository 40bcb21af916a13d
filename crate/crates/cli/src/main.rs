use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dirac_weyl::config::{ConfigError, ExperimentConfig};
use dirac_weyl::experiment::{run_experiment, RunError};
use dirac_weyl::report::{read_column, write_report};
use dirac_weyl_core::catalog::CATALOG;
use dirac_weyl_core::check_conditions;
use dirac_weyl_core::fit_exponent;
use dirac_weyl_core::{CutoffFunction, SemiclassicalProblem};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dirac-weyl",
    version,
    about = "Semiclassical energy asymptotics for 1D Schrödinger operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a config and write sweep.csv and report.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` in the config.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, env = "DIRAC_WEYL_WORKERS", default_value_t = default_workers())]
        workers: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Print the condition report for a config as JSON.
    CheckConditions {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Log-log fit of a column of an existing sweep.csv against h.
    Fit {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value = "abs_err")]
        column: String,
    },
    /// List the built-in potentials.
    Catalog,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

enum Failure {
    Config(String),
    Numeric(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(c) => c.into(),
            n @ RunError::Numeric { .. } => Failure::Numeric(n.to_string()),
        }
    }
}

fn load(path: &Path, epsilon: Option<f64>) -> Result<ExperimentConfig, Failure> {
    let mut config = ExperimentConfig::load(path)?;
    if let Some(e) = epsilon {
        config.epsilon = e;
    }
    config.validate()?;
    Ok(config)
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            config,
            output,
            workers,
            seed,
            epsilon,
        } => {
            let mut config = load(&config, epsilon)?;
            if let Some(s) = seed {
                config.seed = s;
            }
            if let Some(o) = output {
                config.output_dir = o;
            }
            let report = run_experiment(&config, workers)?;
            let (csv, json) = write_report(&report, &config.output_dir)
                .map_err(|e| Failure::Config(format!("cannot write to {}: {e}", config.output_dir.display())))?;
            for r in &report.rows {
                eprintln!(
                    "h = {:<8} I = {:.6e}  leading = {:.6e}  rel_err = {:.3e}",
                    r.h, r.i_exact, r.i_weyl_leading, r.rel_err
                );
            }
            for note in &report.notes {
                eprintln!("note: {note}");
            }
            println!("{}", csv.display());
            println!("{}", json.display());
        }
        Command::CheckConditions { config, epsilon } => {
            let config = load(&config, epsilon)?;
            let h = config.h_values.first().copied().unwrap_or(0.1);
            let problem = SemiclassicalProblem::resolved(
                config.potential()?,
                h,
                (config.domain.x_min, config.domain.x_max),
                config.domain.boundary,
                config.grid_rule as f64,
                CutoffFunction::from(config.psi1),
                CutoffFunction::from(config.psi2),
            )
            .map_err(|e| Failure::Config(e.to_string()))?
            .with_tau(config.tau);
            let report = check_conditions(&problem, config.epsilon);
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
        Command::Fit { csv, column } => {
            let pairs = read_column(&csv, &column).map_err(|e| Failure::Config(e.to_string()))?;
            let fit = fit_exponent(&pairs).map_err(|e| Failure::Numeric(e.to_string()))?;
            println!("{}", serde_json::to_string_pretty(&fit).expect("serializable"));
        }
        Command::Catalog => {
            for e in CATALOG {
                println!("{:<12} {:<20} {}", e.name, e.expression, e.note);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numeric failure: {m}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
