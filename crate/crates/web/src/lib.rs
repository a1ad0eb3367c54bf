//! WebAssembly bindings for the browser demo. Every export returns a flat
//! `Float64Array` so the page can plot it without any glue beyond
//! `wasm-bindgen`.

use std::f64::consts::PI;

use ensemble_coherence::coherence::BasisSearch;
use ensemble_coherence::infotheory::AccessSearch;
use ensemble_coherence::sweep::{b92_record, entanglement_grid, sym_record};
use ensemble_coherence::sympovm::basis_profile as profile;
use ensemble_coherence::{alpha_for_entanglement, GammaSearch, Settings, SweepRecord, SymPovmSpec};
use wasm_bindgen::prelude::*;

/// Values per point in [`b92_curve`] and [`sym_curve`] output.
pub const STRIDE: usize = 5;

/// Coarser grids and fewer measurement starts than the library defaults, to
/// keep single-threaded curves interactive. Golden-section refinement keeps
/// the tolerances, so values agree with the defaults to plotting accuracy.
fn demo_settings() -> Settings {
    Settings {
        basis: BasisSearch {
            grid: 128,
            ..BasisSearch::default()
        },
        gamma: GammaSearch {
            grid: 32,
            ..GammaSearch::default()
        },
        access: AccessSearch {
            starts: 8,
            ..AccessSearch::default()
        },
    }
}

fn flatten(rows: impl Iterator<Item = SweepRecord>) -> Box<[f64]> {
    rows.flat_map(|r| [r.entanglement, r.coherence, r.holevo, r.accessible_info, r.lower_bound])
        .collect()
}

fn to_js(e: ensemble_coherence::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// B92 curve over `points` entanglement values, as
/// `[E, C, χ, I_acc, χ − I_acc]` per point.
#[wasm_bindgen]
pub fn b92_curve(points: usize) -> Result<Box<[f64]>, JsError> {
    let s = demo_settings();
    let rows = entanglement_grid(points)
        .into_iter()
        .map(|e| b92_record(e, &s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_js)?;
    Ok(flatten(rows.into_iter()))
}

/// Rotation-optimized curve of the `n`-outcome symmetric measurement, same
/// layout as [`b92_curve`].
#[wasm_bindgen]
pub fn sym_curve(n: usize, points: usize) -> Result<Box<[f64]>, JsError> {
    let s = demo_settings();
    let rows = entanglement_grid(points)
        .into_iter()
        .map(|e| sym_record(n, e, &s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_js)?;
    Ok(flatten(rows.into_iter()))
}

/// Coherence in the real basis `θ` for `samples` values of `θ ∈ [0, π]`, for
/// the ensemble steered by the `n`-outcome measurement at rotation `gamma`
/// from a state of entanglement `e`.
#[wasm_bindgen]
pub fn basis_profile(n: usize, gamma: f64, e: f64, samples: usize) -> Result<Box<[f64]>, JsError> {
    let spec = SymPovmSpec::new(n, gamma).map_err(to_js)?;
    let state = alpha_for_entanglement(e).map_err(to_js)?;
    let ens = ensemble_coherence::sym_ensemble(&spec, &state).map_err(to_js)?;
    let thetas: Vec<f64> = (0..samples.max(2))
        .map(|k| PI * k as f64 / (samples.max(2) - 1) as f64)
        .collect();
    Ok(profile(&ens, &thetas).into_boxed_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_have_expected_layout() {
        let c = b92_curve(3).unwrap();
        assert_eq!(c.len(), 3 * STRIDE);
        assert_eq!(c[0], 0.0);
        assert_eq!(c[2 * STRIDE], 1.0);
        assert!(c[STRIDE + 1] <= c[STRIDE + 2] + 1e-9);
    }

    #[test]
    fn sym_two_matches_b92() {
        let (a, b) = (sym_curve(2, 5).unwrap(), b92_curve(5).unwrap());
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn demo_settings_match_library_defaults() {
        let (fast, full) = (demo_settings(), Settings::default());
        for n in [2, 3, 4, 6] {
            for e in [0.2, 0.5, 0.8, 1.0] {
                let a = sym_record(n, e, &fast).unwrap();
                let b = sym_record(n, e, &full).unwrap();
                for (x, y) in [
                    (a.coherence, b.coherence),
                    (a.accessible_info, b.accessible_info),
                    (a.lower_bound, b.lower_bound),
                ] {
                    assert!((x - y).abs() < 1e-6, "n = {n}, E = {e}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn profile_minimum_is_the_coherence() {
        let p = basis_profile(2, PI / 2.0, 0.3, 1001).unwrap();
        let min = p.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((min - 0.3).abs() < 1e-3);
        assert!(p[0] <= min + 1e-12);
    }
}
