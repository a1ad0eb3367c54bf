//! Entanglement sweeps that produce one [`SweepRecord`] per grid point.

use std::f64::consts::FRAC_PI_2;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::entangle::{alpha_for_entanglement, dual_map, Povm};
use crate::error::Result;
use crate::sympovm::{gamma_optimized_coherence_with, record_for, Settings, SweepRecord};

/// `points` evenly spaced entanglement values covering `[0, 1]`.
pub fn entanglement_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|k| {
                if k + 1 == points {
                    1.0
                } else {
                    k as f64 / (points - 1) as f64
                }
            })
            .collect(),
    }
}

/// Hadamard measurement on Alice's side: the B92 pair.
pub fn b92_record(e: f64, settings: &Settings) -> Result<SweepRecord> {
    let state = alpha_for_entanglement(e)?;
    let ens = dual_map(&state, &Povm::hadamard())?;
    Ok(record_for(&state, 2, FRAC_PI_2, &ens, settings))
}

/// Symmetric N-element observable, rotation angle optimized.
pub fn sym_record(n: usize, e: f64, settings: &Settings) -> Result<SweepRecord> {
    let state = alpha_for_entanglement(e)?;
    gamma_optimized_coherence_with(n, &state, settings)
}

fn map_grid<F>(grid: &[f64], f: F) -> Result<Vec<SweepRecord>>
where
    F: Fn(f64) -> Result<SweepRecord> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        grid.par_iter().map(|&e| f(e)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        grid.iter().map(|&e| f(e)).collect()
    }
}

/// B92 rows for every point of `grid`, in grid order.
pub fn b92_sweep(grid: &[f64], settings: &Settings) -> Result<Vec<SweepRecord>> {
    map_grid(grid, |e| b92_record(e, settings))
}

/// Symmetric-observable rows for every point of `grid`, in grid order.
pub fn sym_sweep(n: usize, grid: &[f64], settings: &Settings) -> Result<Vec<SweepRecord>> {
    map_grid(grid, |e| sym_record(n, e, settings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        assert_eq!(entanglement_grid(3), vec![0.0, 0.5, 1.0]);
        assert_eq!(entanglement_grid(201)[200], 1.0);
        assert_eq!(entanglement_grid(1), vec![0.0]);
    }

    #[test]
    fn b92_three_points() {
        let rows = b92_sweep(&entanglement_grid(3), &Settings::default()).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].coherence < 1e-12 && rows[2].coherence < 1e-12);
        assert!(rows.iter().all(SweepRecord::sandwich_holds));
        assert!((rows[1].entanglement - 0.5).abs() < 1e-10);
    }

    #[test]
    fn sym_zero_entanglement_row() {
        let r = sym_record(3, 0.0, &Settings::default()).unwrap();
        for v in [r.coherence, r.holevo, r.accessible_info, r.lower_bound, r.entanglement] {
            assert!(v.abs() < 1e-12);
        }
    }
}
