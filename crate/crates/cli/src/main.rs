//! Command-line experiments for temporal-mode sorting and SPDC sources.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use config::{Experiment, Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
        }
    }
}

impl From<tmsort::Error> for CliError {
    fn from(e: tmsort::Error) -> Self {
        use tmsort::Error as E;
        match e {
            E::InvalidParameter(_)
            | E::NotUnimodular { .. }
            | E::SingularConfiguration(_)
            | E::OutOfRegime(_)
            | E::InfeasibleDesign(_)
            | E::Parse(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "tmsort", version, about = "Temporal-mode sorter and SPDC source experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Grid points per axis
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    /// Seed for randomized checks
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Route HG_0..HG_{2^m-1} through the interferometer cascade
    SortDemo,
    /// Mod-4 error probability versus mode scale
    SweepPtot,
    /// Even/odd error split versus pump duration
    SweepParity,
    /// Joint temporal amplitude on a grid (CSV plus JSON sidecar)
    JtaMap,
    /// Analytic and numeric Schmidt decomposition
    Schmidt,
    /// Source parameters for a target Schmidt number and RF frequency
    DesignSource,
    /// Run the acceptance checks
    Validate,
}

impl Command {
    fn experiment(self) -> Experiment {
        match self {
            Command::SortDemo => Experiment::SortDemo,
            Command::SweepPtot => Experiment::SweepPtot,
            Command::SweepParity => Experiment::SweepParity,
            Command::JtaMap => Experiment::JtaMap,
            Command::Schmidt => Experiment::Schmidt,
            Command::DesignSource => Experiment::DesignSource,
            Command::Validate => Experiment::Validate,
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.check_experiment(cli.command.experiment())?;
    if cli.out.is_some() {
        cfg.output = cli.out.clone();
    }
    cfg.format = cli.format.or(cfg.format);
    cfg.grid_n = cli.grid_n.or(cfg.grid_n);
    cfg.seed = cli.seed.or(cfg.seed);
    if let Some(n) = cfg.grid_n {
        if n < 3 {
            return Err(CliError::Config(format!("grid_n must be at least 3, got {n}")));
        }
    }
    let (artifact, ok) = match cli.command {
        Command::SortDemo => (commands::sort_demo(&cfg)?, true),
        Command::SweepPtot => (commands::sweep_ptot(&cfg)?, true),
        Command::SweepParity => (commands::sweep_parity(&cfg)?, true),
        Command::JtaMap => (commands::jta_map(&cfg)?, true),
        Command::Schmidt => (commands::schmidt(&cfg)?, true),
        Command::DesignSource => (commands::design_source(&cfg)?, true),
        Command::Validate => {
            let (a, ok) = commands::validate(&cfg)?;
            // The PASS/FAIL lines already went to stdout.
            if cfg.output.is_none() {
                return Ok(ok);
            }
            (a, ok)
        }
    };
    artifact.write(cfg.output.as_deref())?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("acceptance failure");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
