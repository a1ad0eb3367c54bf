//! Command-line surface and its validation into a [`SweepConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ensemble_coherence::coherence::BasisSearch;
use ensemble_coherence::infotheory::AccessSearch;
use ensemble_coherence::{GammaSearch, Settings};
use serde::Serialize;

use crate::error::CliError;

/// Smallest entanglement grid `verify` accepts: the B92 maximum must be
/// located to within 0.05.
pub const VERIFY_MIN_GRID: usize = 21;

/// Smallest POVM size treated as the large-N limit.
pub const ASYMPTOTIC_MIN_N: usize = 64;

#[derive(Debug, Parser)]
#[command(
    name = "ensemble-coherence",
    version,
    about = "Coherence of ensembles steered by a measurement on half of an entangled qubit pair"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hadamard measurement: the B92 pair, swept over entanglement.
    B92(Common),
    /// Symmetric N-outcome measurement with optimized rotation.
    Sym {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Large-N symmetric measurement, where coherence and accessible
    /// information add up to the entanglement.
    Asymptotic {
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check every quantitative claim and print a verdict table.
    Verify {
        /// Comma-separated criterion numbers to run (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Number of evenly spaced entanglement values in [0, 1].
    #[arg(long, default_value_t = 201)]
    pub e_grid: usize,
    /// Output file; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for the multi-start measurement search.
    #[arg(long, default_value_t = AccessSearch::default().seed)]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Refinement tolerance of the basis search, in radians.
    #[arg(long)]
    pub basis_tol: Option<f64>,
    /// Refinement tolerance of the rotation-angle search, in radians.
    #[arg(long)]
    pub gamma_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    B92,
    Sym,
    Asymptotic,
    Verify,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::B92 => "b92",
            Experiment::Sym => "sym",
            Experiment::Asymptotic => "asymptotic",
            Experiment::Verify => "verify",
        }
    }
}

/// A validated run description.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub experiment: Experiment,
    pub n: Option<usize>,
    pub e_grid: usize,
    pub basis_tol: Option<f64>,
    pub gamma_tol: Option<f64>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub criteria: Vec<usize>,
}

fn positive(name: &str, v: Option<f64>) -> Result<(), CliError> {
    match v {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(CliError::Config(format!("--{name} must be positive, got {t}"))),
        _ => Ok(()),
    }
}

impl SweepConfig {
    pub fn from_command(cmd: Command) -> Result<Self, CliError> {
        let (experiment, n, common, criteria) = match cmd {
            Command::B92(c) => (Experiment::B92, None, c, Vec::new()),
            Command::Sym { n, common } => (Experiment::Sym, Some(n), common, Vec::new()),
            Command::Asymptotic { n, common } => (Experiment::Asymptotic, Some(n), common, Vec::new()),
            Command::Verify { criteria, common } => (Experiment::Verify, None, common, criteria),
        };
        if common.e_grid < 2 {
            return Err(CliError::Config(format!(
                "--e-grid must be at least 2, got {}",
                common.e_grid
            )));
        }
        if experiment == Experiment::Verify && common.e_grid < VERIFY_MIN_GRID {
            return Err(CliError::Config(format!(
                "verify needs --e-grid of at least {VERIFY_MIN_GRID} to locate the maximum, got {}",
                common.e_grid
            )));
        }
        match (experiment, n) {
            (Experiment::Sym, Some(n)) if n < 2 => {
                return Err(CliError::Config(format!("--n must be at least 2, got {n}")));
            }
            (Experiment::Asymptotic, Some(n)) if n < ASYMPTOTIC_MIN_N => {
                return Err(CliError::Config(format!(
                    "asymptotic needs --n of at least {ASYMPTOTIC_MIN_N}, got {n}"
                )));
            }
            _ => {}
        }
        if let Some(bad) = criteria.iter().find(|&&c| !(1..=crate::verify::CRITERIA).contains(&c)) {
            return Err(CliError::Config(format!(
                "no criterion {bad}; valid numbers are 1..={}",
                crate::verify::CRITERIA
            )));
        }
        positive("basis-tol", common.basis_tol)?;
        positive("gamma-tol", common.gamma_tol)?;
        if common.threads == Some(0) {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        Ok(SweepConfig {
            experiment,
            n,
            e_grid: common.e_grid,
            basis_tol: common.basis_tol,
            gamma_tol: common.gamma_tol,
            seed: common.seed,
            threads: common.threads,
            output_path: common.out,
            format: common.format,
            criteria,
        })
    }

    /// Optimizer settings implied by the tolerances and seed.
    pub fn settings(&self) -> Settings {
        Settings {
            basis: self
                .basis_tol
                .map_or_else(BasisSearch::default, BasisSearch::with_tolerance),
            gamma: self
                .gamma_tol
                .map_or_else(GammaSearch::default, GammaSearch::with_tolerance),
            access: AccessSearch {
                seed: self.seed,
                ..AccessSearch::default()
            },
        }
    }
}
