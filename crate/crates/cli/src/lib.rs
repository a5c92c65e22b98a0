//! Command-line driver: basis generation, verification, concentration
//! analysis, extrapolation and file transforms.

pub mod basis;
pub mod concentration;
pub mod config;
pub mod error;
pub mod extrapolate;
pub mod output;
pub mod qft;
pub mod svg;
pub mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use config::RunConfig;
use error::{CliError, CliResult};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "qpswf", version, about = "Quaternionic prolate spheroidal wave functions")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for random test signals (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Residual tolerance (overrides the config).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the basis and write the manifest, eigenvalues and element files.
    Basis,
    /// Recompute and check every element listed in a manifest.
    Verify {
        /// Defaults to `<output>/manifest.json`.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Energy-concentration region, extremal signals and an optional input signal.
    Concentration {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Iterative band-limited extrapolation of an observation.
    Extrapolate {
        #[arg(long)]
        observation: PathBuf,
        #[arg(long)]
        problem: PathBuf,
    },
    /// Quaternionic Fourier transform of a QGRID file.
    Qft {
        #[arg(value_enum)]
        direction: Direction,
        #[arg(long)]
        input: PathBuf,
        /// Output file stem.
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Config from `--config` (or defaults) with command-line overrides applied.
pub fn resolve_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(o) = &cli.output {
        cfg.output_dir = o.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.tol {
        cfg.tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Caps the global thread pool from `QPSWF_THREADS`.
pub fn init_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("QPSWF_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::input("env.QPSWF_THREADS", format!("expected a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::input("env.QPSWF_THREADS", e.to_string()))
}

/// Runs one parsed invocation; the message of a successful run goes to stdout.
pub fn run(cli: &Cli) -> CliResult<String> {
    let cfg = resolve_config(cli)?;
    let out = cfg.output_dir.clone();
    match &cli.command {
        Command::Basis => {
            let m = basis::run(&cfg, &out)?;
            Ok(format!("wrote {} elements to {}", m.entries.len(), out.display()))
        }
        Command::Verify { manifest } => {
            let path = manifest.clone().unwrap_or_else(|| verify::default_manifest(&out));
            let r = verify::run(&cfg, &path, &out)?;
            Ok(format!(
                "verified {} elements, all residuals <= {:e}",
                r.elements, r.tol
            ))
        }
        Command::Concentration { input } => {
            let r = concentration::run(&cfg, input.as_deref(), &out)?;
            Ok(format!(
                "lambda0 = {:e}, {} region points, min deficit {:e}",
                r.lambda0, r.points, r.min_deficit
            ))
        }
        Command::Extrapolate { observation, problem } => {
            let s = extrapolate::run(observation, problem, &out)?;
            Ok(format!("converged after {} steps", s.steps))
        }
        Command::Qft { direction, input, name } => match direction {
            Direction::Forward => {
                let files = qft::forward(input, name.as_deref().unwrap_or("spectrum"), &out)?;
                Ok(format!("wrote {} files to {}", files.len(), out.display()))
            }
            Direction::Inverse => {
                let f = qft::inverse(input, name.as_deref().unwrap_or("signal"), &out)?;
                Ok(format!("wrote {}", f.display()))
            }
        },
    }
}
