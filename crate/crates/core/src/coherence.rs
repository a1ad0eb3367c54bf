//! Relative entropy of coherence for single states and ensembles, and its
//! minimization over measurement bases.

use std::f64::consts::{PI, TAU};

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::entangle::Ensemble;
use crate::error::{Error, Result};
use crate::optimize::{coordinate_search, scan_minimize, ScanOptions};
use crate::qubit::{h2, von_neumann_entropy, DensityOperator, MeasurementBasis};

/// Outcome of a basis-free coherence minimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceResult {
    pub value: f64,
    pub optimal_basis: MeasurementBasis,
    pub optimizer_iterations: usize,
}

/// `S(ρ_diag) − S(ρ)` with `ρ_diag` the dephasing of `rho` in `basis`.
pub fn relative_entropy_coherence(rho: &DensityOperator, basis: &MeasurementBasis) -> f64 {
    let d = rho.expectation(&basis.e1());
    (h2(d) - von_neumann_entropy(rho)).max(0.0)
}

/// Probability-weighted coherence of an ensemble in a fixed basis. All-pure
/// ensembles go through `h₂(|⟨e₁|ψᵢ⟩|²)` directly.
pub fn ensemble_coherence_in_basis(ens: &Ensemble, basis: &MeasurementBasis) -> f64 {
    if ens.is_all_pure() {
        let e1 = basis.e1();
        ens.entries()
            .iter()
            .map(|e| e.probability * h2(e1.fidelity(&e.pure.expect("all pure"))))
            .sum()
    } else {
        ens.entries()
            .iter()
            .map(|e| e.probability * relative_entropy_coherence(&e.state, basis))
            .sum()
    }
}

/// Ensemble coherence as a function of the Bloch axis of `|e₁⟩`.
///
/// With `rᵢ` the Bloch vector of `ρᵢ`, the dephased state in a basis with
/// axis `n` has diagonal `(1 ± n·rᵢ)/2`, so the objective is
/// `Σ pᵢ [h₂((1 + n·rᵢ)/2) − S(ρᵢ)]`.
#[derive(Debug, Clone)]
pub struct BasisObjective {
    terms: Vec<(f64, [f64; 3], f64)>,
}

impl BasisObjective {
    pub fn new(ens: &Ensemble) -> Self {
        let terms = ens
            .entries()
            .iter()
            .map(|e| match e.pure {
                Some(psi) => (e.probability, psi.bloch_vector(), 0.0),
                None => (e.probability, e.state.bloch_vector(), von_neumann_entropy(&e.state)),
            })
            .collect();
        BasisObjective { terms }
    }

    pub fn at_axis(&self, n: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(p, r, s)| p * (h2(0.5 * (1.0 + n[0] * r[0] + n[1] * r[1] + n[2] * r[2])) - s))
            .sum()
    }

    /// Real-plane basis with `φ = 0`.
    pub fn at_theta(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.terms
            .iter()
            .map(|(p, r, ent)| p * (h2(0.5 * (1.0 + s * r[0] + c * r[2])) - ent))
            .sum()
    }

    pub fn at_basis(&self, basis: &MeasurementBasis) -> f64 {
        self.at_axis(basis.axis())
    }
}

/// Resolution settings for the basis search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSearch {
    /// θ grid points for the real-plane search.
    pub grid: usize,
    /// Golden-section bracket width in radians.
    pub tol: f64,
    pub grid_theta: usize,
    pub grid_phi: usize,
    /// Tangent-chart refinement rounds for the 2-D search.
    pub rounds: usize,
}

impl Default for BasisSearch {
    fn default() -> Self {
        BasisSearch {
            grid: 1024,
            tol: 1e-10,
            grid_theta: 256,
            grid_phi: 128,
            rounds: 3,
        }
    }
}

impl BasisSearch {
    /// Default search with a different refinement tolerance. Tolerances
    /// coarser than the default grid spacing also coarsen the grids.
    pub fn with_tolerance(tol: f64) -> Self {
        let d = Self::default();
        let cap = |max: usize, range: f64| ((range / tol).ceil() as usize + 1).clamp(4, max);
        BasisSearch {
            grid: cap(d.grid, PI),
            tol,
            grid_theta: cap(d.grid_theta, PI),
            grid_phi: cap(d.grid_phi, TAU),
            rounds: d.rounds,
        }
    }
}

/// Minimum of [`ensemble_coherence_in_basis`] over all orthonormal bases.
///
/// With `real_plane` set the search is restricted to real bases (`φ = 0`,
/// `θ ∈ [0, π]`), which is exact for ensembles of real states.
pub fn basis_free_coherence(ens: &Ensemble, real_plane: bool) -> CoherenceResult {
    basis_free_coherence_with(ens, real_plane, &BasisSearch::default())
}

pub fn basis_free_coherence_with(ens: &Ensemble, real_plane: bool, search: &BasisSearch) -> CoherenceResult {
    let objective = BasisObjective::new(ens);
    if real_plane {
        minimize_real_plane(&objective, search)
    } else {
        minimize_sphere(&objective, search)
    }
}

/// Bases whose objective values differ by less than this count as equally
/// good; the smaller `θ` is reported. `θ = π` and `θ = 0` label the same real
/// basis, so this also keeps refinements near `π` from displacing `θ = 0`.
pub const BASIS_TIE_EPS: f64 = 1e-12;

pub(crate) fn minimize_real_plane(objective: &BasisObjective, search: &BasisSearch) -> CoherenceResult {
    let opts = ScanOptions {
        tie_eps: BASIS_TIE_EPS,
        ..ScanOptions::new(search.grid, search.tol)
    };
    let m = scan_minimize(|t| objective.at_theta(t), 0.0, PI, &opts);
    let basis = MeasurementBasis::real(m.x).expect("theta within [0, pi]");
    CoherenceResult {
        value: m.value,
        optimal_basis: basis,
        optimizer_iterations: m.evaluations,
    }
}

fn tangent_frame(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let t1 = cross(n, helper);
    let len = (t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]).sqrt();
    let t1 = [t1[0] / len, t1[1] / len, t1[2] / len];
    (t1, cross(n, t1))
}

fn chart_point(n: [f64; 3], t1: [f64; 3], t2: [f64; 3], u: f64, v: f64) -> [f64; 3] {
    let p = [0, 1, 2].map(|k| n[k] + u * t1[k] + v * t2[k]);
    let len = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    p.map(|c| c / len)
}

fn minimize_sphere(objective: &BasisObjective, search: &BasisSearch) -> CoherenceResult {
    let (gt, gp) = (search.grid_theta.max(2), search.grid_phi.max(1));
    let thetas: Vec<f64> = (0..gt).map(|i| PI * i as f64 / (gt - 1) as f64).collect();
    let phis: Vec<f64> = (0..gp).map(|j| TAU * j as f64 / gp as f64).collect();
    let row = |&theta: &f64| -> Vec<f64> {
        phis.iter()
            .map(|&phi| objective.at_basis(&MeasurementBasis { theta, phi }))
            .collect()
    };
    #[cfg(feature = "parallel")]
    let grid: Vec<Vec<f64>> = thetas.par_iter().map(row).collect();
    #[cfg(not(feature = "parallel"))]
    let grid: Vec<Vec<f64>> = thetas.iter().map(row).collect();
    let mut evaluations = gt * gp;

    let mut local = Vec::new();
    for i in 0..gt {
        for j in 0..gp {
            let v = grid[i][j];
            let mut neighbours = vec![grid[i][(j + 1) % gp], grid[i][(j + gp - 1) % gp]];
            if i > 0 {
                neighbours.push(grid[i - 1][j]);
            }
            if i + 1 < gt {
                neighbours.push(grid[i + 1][j]);
            }
            if neighbours.iter().all(|&w| v <= w) {
                local.push((v, i, j));
            }
        }
    }
    local.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    local.truncate(4);

    let spacing = (PI / (gt - 1) as f64).max(TAU / gp as f64);
    let (v0, i0, j0) = local[0];
    let mut best = (
        v0,
        MeasurementBasis {
            theta: thetas[i0],
            phi: phis[j0],
        },
    );
    for &(_, i, j) in &local {
        let mut axis = MeasurementBasis {
            theta: thetas[i],
            phi: phis[j],
        }
        .axis();
        let mut span = spacing;
        for _ in 0..search.rounds.max(1) {
            let (t1, t2) = tangent_frame(axis);
            let m = coordinate_search(
                |x| objective.at_axis(chart_point(axis, t1, t2, x[0], x[1])),
                vec![0.0, 0.0],
                span,
                9,
                search.tol,
                100,
            );
            evaluations += m.evaluations;
            axis = chart_point(axis, t1, t2, m.x[0], m.x[1]);
            span = (span * 0.25).max(search.tol);
        }
        let basis = MeasurementBasis::from_axis(axis);
        let value = objective.at_basis(&basis);
        if value < best.0 - BASIS_TIE_EPS || (value <= best.0 + BASIS_TIE_EPS && basis.theta < best.1.theta) {
            best = (value, basis);
        }
    }
    CoherenceResult {
        value: best.0,
        optimal_basis: best.1,
        optimizer_iterations: evaluations,
    }
}

/// Mixes `rho` into an ensemble with weight `delta`:
/// `{(δ, ρ)} ∪ {((1−δ)pᵢ, ηᵢ)}`. Zero-weight members are dropped.
pub fn perturb_ensemble(ens: &Ensemble, rho: &DensityOperator, delta: f64) -> Result<Ensemble> {
    if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain {
            what: "delta",
            value: delta,
            domain: "[0, 1]",
        });
    }
    let mut entries = vec![(delta, *rho)];
    entries.extend(ens.entries().iter().map(|e| ((1.0 - delta) * e.probability, e.state)));
    Ensemble::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::{dual_map, entanglement, Povm, SchmidtState};
    use crate::qubit::PureState;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, SQRT_2};

    fn b92(alpha: f64) -> Ensemble {
        dual_map(&SchmidtState::new(alpha).unwrap(), &Povm::hadamard()).unwrap()
    }

    #[test]
    fn single_state_coherence_examples() {
        let b = MeasurementBasis::new(0.9, 1.4).unwrap();
        let own = DensityOperator::from_pure(&b.e1());
        assert!(relative_entropy_coherence(&own, &b) < 1e-14);
        let plus = DensityOperator::from_pure(&PureState::plus());
        assert!((relative_entropy_coherence(&plus, &MeasurementBasis::computational()) - 1.0).abs() < 1e-14);
        let psi = PureState::real(FRAC_PI_8.cos(), FRAC_PI_8.sin()).unwrap();
        let c = relative_entropy_coherence(&DensityOperator::from_pure(&psi), &MeasurementBasis::computational());
        assert!((c - h2((2.0 + SQRT_2) / 4.0)).abs() < 1e-14);
        assert!((c - 0.60088).abs() < 1e-4);
    }

    #[test]
    fn b92_in_computational_basis_equals_entanglement() {
        let comp = MeasurementBasis::computational();
        assert!((ensemble_coherence_in_basis(&b92(FRAC_PI_4), &comp) - 1.0).abs() < 1e-14);
        for alpha in [0.05, 0.3, FRAC_PI_8, 0.7] {
            let e = entanglement(&SchmidtState::new(alpha).unwrap());
            assert!((ensemble_coherence_in_basis(&b92(alpha), &comp) - e).abs() < 1e-14);
        }
    }

    #[test]
    fn pure_fast_path_matches_general_path() {
        let ens = b92(0.37);
        let mixed_view = Ensemble::new(ens.entries().iter().map(|e| (e.probability, e.state)).collect()).unwrap();
        for k in 0..50 {
            let b = MeasurementBasis::new(k as f64 * 0.06, k as f64 * 0.13).unwrap();
            let fast = ensemble_coherence_in_basis(&ens, &b);
            let general: f64 = mixed_view
                .entries()
                .iter()
                .map(|e| e.probability * relative_entropy_coherence(&e.state, &b))
                .sum();
            assert!((fast - general).abs() < 1e-12);
            assert!((BasisObjective::new(&ens).at_basis(&b) - fast).abs() < 1e-12);
        }
    }

    #[test]
    fn single_entry_reduces_to_state_coherence() {
        let rho = DensityOperator::new(crate::qubit::Mat2::from_real([[0.7, 0.2], [0.2, 0.3]])).unwrap();
        let ens = Ensemble::new(vec![(1.0, rho)]).unwrap();
        let b = MeasurementBasis::new(0.4, 0.0).unwrap();
        assert!((ensemble_coherence_in_basis(&ens, &b) - relative_entropy_coherence(&rho, &b)).abs() < 1e-15);
    }

    #[test]
    fn commuting_ensemble_has_no_coherence() {
        let ens = Ensemble::from_pure(vec![(0.5, PureState::zero()), (0.5, PureState::one())]).unwrap();
        assert!(basis_free_coherence(&ens, true).value < 1e-12);
        assert!(basis_free_coherence(&ens, false).value < 1e-12);
    }

    #[test]
    fn pure_single_state_is_incoherent_in_own_basis() {
        let psi = PureState::bloch(1.2, 2.3);
        let ens = Ensemble::from_pure(vec![(1.0, psi)]).unwrap();
        assert!(basis_free_coherence(&ens, false).value < 1e-9);
    }

    #[test]
    fn result_reproduces_value_at_optimal_basis() {
        let ens = b92(FRAC_PI_8);
        for real in [true, false] {
            let r = basis_free_coherence(&ens, real);
            assert!((ensemble_coherence_in_basis(&ens, &r.optimal_basis) - r.value).abs() < 1e-9);
            assert!(r.value <= ensemble_coherence_in_basis(&ens, &MeasurementBasis::computational()) + 1e-9);
        }
    }

    #[test]
    fn coarse_tolerance_coarsens_grid() {
        let s = BasisSearch::with_tolerance(1.0);
        assert_eq!(s.grid, 5);
        assert_eq!(BasisSearch::with_tolerance(1e-10).grid, 1024);
    }

    #[test]
    fn perturbation_weights() {
        let ens = b92(FRAC_PI_8);
        let mixed = DensityOperator::maximally_mixed();
        let p = perturb_ensemble(&ens, &mixed, 0.5).unwrap();
        let probs = p.probabilities();
        assert_eq!(probs.len(), 3);
        for (a, b) in probs.iter().zip([0.5, 0.25, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
        let same = perturb_ensemble(&ens, &mixed, 0.0).unwrap();
        assert_eq!(same.len(), 2);
        let only = perturb_ensemble(&ens, &mixed, 1.0).unwrap();
        assert_eq!(only.len(), 1);
        assert!(perturb_ensemble(&ens, &mixed, 1.5).is_err());
        assert!(perturb_ensemble(&ens, &mixed, -0.1).is_err());
    }
}
