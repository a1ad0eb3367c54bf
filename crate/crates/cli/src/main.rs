mod config;
mod error;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;
use ensemble_coherence::sweep::{b92_sweep, entanglement_grid, sym_sweep};
use ensemble_coherence::sympovm::{split_at, CONVERGENCE_SIZES};
use ensemble_coherence::{alpha_for_entanglement, SweepRecord};

use config::{Cli, Experiment, SweepConfig};
use error::CliError;
use output::Meta;

/// Column order of the CSV output.
pub const HEADER: [&str; 9] = [
    "alpha",
    "entanglement",
    "n",
    "coherence",
    "optimal_gamma",
    "optimal_theta",
    "holevo",
    "accessible_info",
    "lower_bound",
];

/// Grid points used for the convergence diagnostics of `asymptotic`.
const LADDER_POINTS: usize = 11;

fn check_rows(rows: &[SweepRecord]) -> Result<(), CliError> {
    match rows.iter().find(|r| !r.sandwich_holds()) {
        Some(r) => Err(CliError::Claim(format!(
            "sandwich invariant violated at E = {}: bound {} <= coherence {} <= holevo {}",
            r.entanglement, r.lower_bound, r.coherence, r.holevo
        ))),
        None => Ok(()),
    }
}

/// Largest `|E − C − I_acc|` over a thinned grid, for each convergence size.
fn residual_ladder(cfg: &SweepConfig) -> Result<Vec<(usize, f64)>, CliError> {
    let settings = cfg.settings();
    let grid = entanglement_grid(cfg.e_grid.min(LADDER_POINTS));
    let mut out = Vec::new();
    for &n in &CONVERGENCE_SIZES {
        let mut worst = 0.0f64;
        for &e in &grid {
            worst = worst.max(split_at(&alpha_for_entanglement(e)?, n, &settings)?.residual);
        }
        out.push((n, worst));
    }
    if out.windows(2).any(|w| w[1].1 > w[0].1) {
        log::warn!("split residuals do not decrease with n: {out:?}");
    }
    Ok(out)
}

fn sweep(cfg: &SweepConfig) -> Result<(), CliError> {
    let settings = cfg.settings();
    let grid = entanglement_grid(cfg.e_grid);
    let mut meta = Meta::new(cfg);
    let rows = match cfg.experiment {
        Experiment::B92 => b92_sweep(&grid, &settings)?,
        Experiment::Sym => sym_sweep(cfg.n.expect("validated"), &grid, &settings)?,
        Experiment::Asymptotic => {
            for (n, r) in residual_ladder(cfg)? {
                meta.notes.push((format!("residual_n{n}"), format!("{r:e}")));
            }
            sym_sweep(cfg.n.expect("validated"), &grid, &settings)?
        }
        Experiment::Verify => unreachable!("handled by run_verify"),
    };
    check_rows(&rows)?;
    output::emit(cfg, &meta, &rows)
}

fn run_verify(cfg: &SweepConfig) -> Result<(), CliError> {
    let verdicts = verify::run(&cfg.settings(), cfg.e_grid, cfg.seed, &cfg.criteria)?;
    let table = verify::table(&verdicts);
    match &cfg.output_path {
        Some(path) => std::fs::write(path, &table)?,
        None => print!("{table}"),
    }
    let failed: Vec<String> = verdicts.iter().filter(|v| !v.pass).map(|v| v.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Claim(format!("criteria {} failed", failed.join(", "))))
    }
}

fn run(cfg: &SweepConfig) -> Result<(), CliError> {
    match cfg.experiment {
        Experiment::Verify => run_verify(cfg),
        _ => sweep(cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = SweepConfig::from_command(cli.command).and_then(|cfg| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = cfg.threads {
            builder = builder.num_threads(t);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
        pool.install(|| run(&cfg))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
