//! CSV and JSON writers. Rows are written in grid order by a single thread.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use ensemble_coherence::SweepRecord;
use serde::Serialize;

use crate::config::{Format, SweepConfig};
use crate::error::CliError;

/// Run metadata written ahead of the rows.
#[derive(Debug, Serialize)]
pub struct Meta {
    pub experiment: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub seed: u64,
    pub grid: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_tol: Option<f64>,
    pub version: &'static str,
    /// Extra diagnostics, already formatted as `key=value`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<(String, String)>,
}

impl Meta {
    pub fn new(cfg: &SweepConfig) -> Self {
        Meta {
            experiment: cfg.experiment.name(),
            n: cfg.n,
            seed: cfg.seed,
            grid: cfg.e_grid,
            basis_tol: cfg.basis_tol,
            gamma_tol: cfg.gamma_tol,
            version: env!("CARGO_PKG_VERSION"),
            notes: Vec::new(),
        }
    }
}

#[derive(Serialize)]
struct Document<'a> {
    meta: &'a Meta,
    rows: &'a [SweepRecord],
}

pub fn write_csv<W: Write>(mut w: W, meta: &Meta, rows: &[SweepRecord]) -> Result<(), CliError> {
    writeln!(w, "# experiment={}", meta.experiment)?;
    if let Some(n) = meta.n {
        writeln!(w, "# n={n}")?;
    }
    writeln!(w, "# seed={}", meta.seed)?;
    writeln!(w, "# grid={}", meta.grid)?;
    if let Some(t) = meta.basis_tol {
        writeln!(w, "# basis_tol={t}")?;
    }
    if let Some(t) = meta.gamma_tol {
        writeln!(w, "# gamma_tol={t}")?;
    }
    for (k, v) in &meta.notes {
        writeln!(w, "# {k}={v}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    if rows.is_empty() {
        csv.write_record(crate::HEADER)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut w: W, meta: &Meta, rows: &[SweepRecord]) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut w, &Document { meta, rows })?;
    writeln!(w)?;
    Ok(())
}

/// Writes `rows` to the configured destination in the configured format.
pub fn emit(cfg: &SweepConfig, meta: &Meta, rows: &[SweepRecord]) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match &cfg.output_path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cfg.format {
        Format::Csv => write_csv(sink, meta, rows),
        Format::Json => write_json(sink, meta, rows),
    }
}
