//! Command-line front end: every subcommand reads one TOML experiment
//! config and writes CSV tables, TOML documents or an SVG plot.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 inconclusive verdict,
//! 3 numeric failure, 4 failed harness verification.

pub mod commands;
pub mod config;
pub mod output;
pub mod plot;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{CmdResult, Failure, EXIT_OK, EXIT_USAGE};
use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Elliptic / hyperbolic / parabolic verdict and Denjoy-Wolff point
    Classify,
    /// Forward orbits of the configured starts
    Orbit,
    /// Pseudo-hyperbolic step series and zero-step verdicts
    Steps,
    /// Koranyi, special and restricted diagnostics along orbits
    Approach,
    /// Pommerenke or Baker-Pommerenke normalised iterates
    Conjugate,
    /// Checks that restricted parabolic orbits have zero step
    Harness,
    /// Compares step verdicts across several starts
    Probe,
    /// SVG of an orbit in the unit-disk cross-section
    Plot,
}

#[derive(Debug, Parser)]
#[command(name = "dwolff", version, about = "Denjoy-Wolff dynamics experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment config (TOML)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding the config
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized suites, overriding the config
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Iteration budget, overriding the config
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

impl Cli {
    pub fn load_config(&self) -> Result<ExperimentConfig, Failure> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p).map_err(Failure::usage)?,
            None => ExperimentConfig::from_toml("").map_err(Failure::usage)?,
        };
        if let Some(out) = &self.out {
            cfg.output.dir = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(n) = self.n_max {
            cfg.budgets.n_max = n;
        }
        Ok(cfg)
    }
}

pub fn execute(command: Command, cfg: &ExperimentConfig, format: Format) -> CmdResult {
    use commands::*;
    match command {
        Command::Classify => cmd_classify(cfg, format),
        Command::Orbit => cmd_orbit(cfg, format),
        Command::Steps => cmd_steps(cfg, format),
        Command::Approach => cmd_approach(cfg, format),
        Command::Conjugate => cmd_conjugate(cfg, format),
        Command::Harness => cmd_harness(cfg, format),
        Command::Probe => cmd_probe(cfg, format),
        Command::Plot => cmd_plot(cfg, format),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Summaries go to `out`, errors to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    let result = cli.load_config().and_then(|cfg| execute(cli.command, &cfg, cli.format));
    match result {
        Ok(outcome) => {
            let _ = writeln!(out, "{}", outcome.summary);
            for f in &outcome.files {
                let _ = writeln!(out, "wrote {}", f.display());
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {:#}", f.error);
            f.code
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}
