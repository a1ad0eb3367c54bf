//! Symmetric rank-1 observables `{(2/N)|ξᵢ⟩⟨ξᵢ|}` with `|ξᵢ⟩` spaced evenly
//! around the XZ great circle, the ensembles they induce on Bob's side, and
//! the rotation angle that maximizes the resulting coherence.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::coherence::{basis_free_coherence_with, BasisObjective, BasisSearch};
use crate::entangle::{entanglement, Ensemble, Povm, SchmidtState, DROP_PROBABILITY};
use crate::error::{Error, Result};
use crate::infotheory::{accessible_information_with, holevo, AccessSearch};
use crate::optimize::{scan_maximize, ScanOptions, Tie};
use crate::qubit::{Mat2, PureState};

/// Number of elements and rotation angle of a symmetric observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymPovmSpec {
    n: usize,
    gamma: f64,
}

impl SymPovmSpec {
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain {
                what: "n",
                value: n as f64,
                domain: "n >= 2",
            });
        }
        let max = PI / n as f64;
        if !gamma.is_finite() || !(-1e-12..=max + 1e-12).contains(&gamma) {
            return Err(Error::Domain {
                what: "gamma",
                value: gamma,
                domain: "[0, pi/n]",
            });
        }
        Ok(SymPovmSpec {
            n,
            gamma: gamma.clamp(0.0, max),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Bloch angles `θᵢ = γ + 2π(i−1)/N`.
    pub fn angles(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.gamma + TAU * i as f64 / self.n as f64)
            .collect()
    }

    /// The states `|ξᵢ⟩ = cos(θᵢ/2)|0⟩ + sin(θᵢ/2)|1⟩`.
    pub fn states(&self) -> Vec<PureState> {
        self.angles().into_iter().map(|t| PureState::bloch(t, 0.0)).collect()
    }
}

/// `U = cos(π/N) 𝟙 − i sin(π/N) σ_y`, mapping `|ξᵢ₋₁⟩` to `|ξᵢ⟩`.
pub fn sym_rotation(n: usize) -> Mat2 {
    let (s, c) = (PI / n as f64).sin_cos();
    Mat2::from_real([[c, -s], [s, c]])
}

pub fn build_sym_povm(spec: &SymPovmSpec) -> Povm {
    let w = 2.0 / spec.n as f64;
    Povm::from_rank1(spec.states().into_iter().map(|s| (w, s)).collect())
        .expect("evenly spaced states resolve the identity")
}

/// Outcome probabilities
/// `pᵢ = (2/N)(cos²(θᵢ/2) cos²α + sin²(θᵢ/2) sin²α)`.
pub fn sym_probabilities(spec: &SymPovmSpec, state: &SchmidtState) -> Vec<f64> {
    let [l0, l1] = state.lambdas();
    let w = 2.0 / spec.n as f64;
    spec.angles()
        .into_iter()
        .map(|t| {
            let (s, c) = (t / 2.0).sin_cos();
            w * (c * c * l0 + s * s * l1)
        })
        .collect()
}

/// Bob's ensemble in closed form,
/// `|ψᵢ⟩ ∝ cos α cos(θᵢ/2)|0⟩ + sin α sin(θᵢ/2)|1⟩`. Zero-probability
/// members are dropped and coinciding states merged.
pub fn sym_ensemble(spec: &SymPovmSpec, state: &SchmidtState) -> Result<Ensemble> {
    let (ca, sa) = state.coefficients();
    let probs = sym_probabilities(spec, state);
    let w = 2.0 / spec.n as f64;
    let members = spec
        .angles()
        .into_iter()
        .zip(probs)
        .filter(|&(_, p)| p > DROP_PROBABILITY)
        .map(|(t, p)| {
            let (s, c) = (t / 2.0).sin_cos();
            let k = (w / p).sqrt();
            Ok((p, PureState::real(k * ca * c, k * sa * s)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble::from_pure(members)?.merge_duplicates())
}

/// One row of a coherence sweep. Angles in radians, entropic quantities in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub alpha: f64,
    pub entanglement: f64,
    pub n: usize,
    pub coherence: f64,
    pub optimal_gamma: f64,
    pub optimal_theta: f64,
    pub holevo: f64,
    pub accessible_info: f64,
    pub lower_bound: f64,
}

/// Slack allowed on `lower_bound ≤ coherence ≤ holevo`.
pub const SANDWICH_TOL: f64 = 1e-6;

impl SweepRecord {
    /// `lower_bound ≤ coherence ≤ holevo`, each up to [`SANDWICH_TOL`].
    pub fn sandwich_holds(&self) -> bool {
        self.lower_bound <= self.coherence + SANDWICH_TOL && self.coherence <= self.holevo + SANDWICH_TOL
    }
}

/// Grid and tolerance for the outer rotation-angle search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSearch {
    pub grid: usize,
    pub tol: f64,
    /// Coherence values closer than this count as tied; ties go to larger γ.
    pub tie_eps: f64,
}

impl Default for GammaSearch {
    fn default() -> Self {
        GammaSearch {
            grid: 256,
            tol: 1e-10,
            tie_eps: 1e-12,
        }
    }
}

impl GammaSearch {
    pub fn with_tolerance(tol: f64) -> Self {
        let d = Self::default();
        GammaSearch {
            grid: ((PI / 2.0 / tol).ceil() as usize + 1).clamp(2, d.grid),
            tol,
            ..d
        }
    }
}

/// All optimizer settings used when building sweep records.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Settings {
    pub basis: BasisSearch,
    pub gamma: GammaSearch,
    pub access: AccessSearch,
}

/// Coherence, Holevo quantity and accessible information of one ensemble.
pub(crate) fn record_for(
    state: &SchmidtState,
    n: usize,
    gamma: f64,
    ens: &Ensemble,
    settings: &Settings,
) -> SweepRecord {
    let c = basis_free_coherence_with(ens, true, &settings.basis);
    let chi = holevo(ens);
    let acc = accessible_information_with(ens, &settings.access).value;
    SweepRecord {
        alpha: state.alpha(),
        entanglement: entanglement(state),
        n,
        coherence: c.value,
        optimal_gamma: gamma,
        optimal_theta: c.optimal_basis.theta,
        holevo: chi,
        accessible_info: acc,
        lower_bound: (chi - acc).max(0.0),
    }
}

/// `max_γ min_T C_T` for the N-element symmetric observable, with the
/// information quantities of the maximizing ensemble.
pub fn gamma_optimized_coherence(n: usize, state: &SchmidtState) -> Result<SweepRecord> {
    gamma_optimized_coherence_with(n, state, &Settings::default())
}

pub fn gamma_optimized_coherence_with(n: usize, state: &SchmidtState, settings: &Settings) -> Result<SweepRecord> {
    let max_gamma = PI / SymPovmSpec::new(n, 0.0)?.n() as f64;
    let inner = |gamma: f64| -> f64 {
        let spec = SymPovmSpec::new(n, gamma.clamp(0.0, max_gamma)).expect("gamma within window");
        let ens = sym_ensemble(&spec, state).expect("valid symmetric ensemble");
        basis_free_coherence_with(&ens, true, &settings.basis).value
    };
    let opts = ScanOptions {
        tie_eps: settings.gamma.tie_eps,
        tie: Tie::Upper,
        ..ScanOptions::new(settings.gamma.grid, settings.gamma.tol)
    };
    let best = scan_maximize(inner, 0.0, max_gamma, &opts);
    let gamma = best.x.clamp(0.0, max_gamma);
    if n.is_multiple_of(2) && (gamma - max_gamma).abs() > 1e-3 {
        log::warn!(
            "n = {n}, alpha = {}: optimal gamma {gamma} differs from pi/n",
            state.alpha()
        );
    }
    let ens = sym_ensemble(&SymPovmSpec::new(n, gamma)?, state)?;
    Ok(record_for(state, n, gamma, &ens, settings))
}

/// Coherence and accessible information at one POVM size, and how far their
/// sum is from the entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Split {
    pub n: usize,
    pub coherence: f64,
    pub i_acc: f64,
    pub residual: f64,
}

pub fn split_at(state: &SchmidtState, n: usize, settings: &Settings) -> Result<Split> {
    let r = gamma_optimized_coherence_with(n, state, settings)?;
    Ok(Split {
        n,
        coherence: r.coherence,
        i_acc: r.accessible_info,
        residual: (r.entanglement - r.coherence - r.accessible_info).abs(),
    })
}

/// POVM sizes used to check that the split closes as N grows.
pub const CONVERGENCE_SIZES: [usize; 4] = [8, 16, 32, 64];

/// Large-N split of the entanglement into coherence and accessible
/// information. Warns if the residual does not shrink over
/// [`CONVERGENCE_SIZES`].
pub fn asymptotic_split(state: &SchmidtState, n_large: usize) -> Result<Split> {
    asymptotic_split_with(state, n_large, &Settings::default())
}

pub fn asymptotic_split_with(state: &SchmidtState, n_large: usize, settings: &Settings) -> Result<Split> {
    if n_large < 64 {
        return Err(Error::Domain {
            what: "n_large",
            value: n_large as f64,
            domain: "n_large >= 64",
        });
    }
    let residuals: Vec<f64> = CONVERGENCE_SIZES
        .iter()
        .map(|&n| split_at(state, n, settings).map(|s| s.residual))
        .collect::<Result<_>>()?;
    if residuals.windows(2).any(|w| w[1] > w[0] + 1e-9) {
        log::warn!("alpha = {}: residuals {residuals:?} are not decreasing", state.alpha());
    }
    split_at(state, n_large, settings)
}

/// Coherence in the real basis `θ` for each `θ` in `thetas`; handy for
/// plotting the inner minimization.
pub fn basis_profile(ens: &Ensemble, thetas: &[f64]) -> Vec<f64> {
    let objective = BasisObjective::new(ens);
    thetas.iter().map(|&t| objective.at_theta(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::dual_map;
    use crate::qubit::C64;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    #[test]
    fn spec_validation() {
        assert!(SymPovmSpec::new(1, 0.0).is_err());
        assert!(SymPovmSpec::new(3, 1.1).is_err());
        assert!(SymPovmSpec::new(3, -0.1).is_err());
        assert!(SymPovmSpec::new(2, FRAC_PI_2).is_ok());
    }

    #[test]
    fn small_n_povms() {
        let p = build_sym_povm(&SymPovmSpec::new(2, 0.0).unwrap());
        for (m, t) in p.elements().iter().zip(Povm::computational().elements()) {
            assert!(m.max_abs_diff(t) < 1e-15);
        }
        let p = build_sym_povm(&SymPovmSpec::new(2, FRAC_PI_2).unwrap());
        for (m, t) in p.elements().iter().zip(Povm::hadamard().elements()) {
            assert!(m.max_abs_diff(t) < 1e-15);
        }
        // BB84: |0⟩, |+⟩, |1⟩, |−⟩ each with weight ½ (up to sign)
        let p = build_sym_povm(&SymPovmSpec::new(4, 0.0).unwrap());
        let targets = [
            PureState::zero(),
            PureState::plus(),
            PureState::one(),
            PureState::minus(),
        ];
        for ((w, s), t) in p.rank1().unwrap().iter().zip(targets) {
            assert!((w - 0.5).abs() < 1e-15);
            assert!((s.fidelity(&t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rotation_steps_through_states() {
        for n in [2, 3, 5, 8] {
            let spec = SymPovmSpec::new(n, 0.3 / n as f64).unwrap();
            let u = sym_rotation(n);
            let states = spec.states();
            for w in states.windows(2) {
                let next = u.apply(&w[0].amplitudes());
                let a = w[1].amplitudes();
                assert!((next[0] - a[0]).norm() < 1e-12 && (next[1] - a[1]).norm() < 1e-12);
            }
            // U = cos(π/N)𝟙 − i sin(π/N)σ_y
            let (s, c) = (PI / n as f64).sin_cos();
            let direct = Mat2::identity().scale(c) + Mat2::pauli_y().scale_complex(C64::new(0.0, -s));
            assert!(direct.max_abs_diff(&u) < 1e-15);
        }
    }

    #[test]
    fn probabilities_examples() {
        for n in [2, 3, 7] {
            let p = sym_probabilities(
                &SymPovmSpec::new(n, 0.1 / n as f64).unwrap(),
                &SchmidtState::maximally_entangled(),
            );
            assert!(p.iter().all(|x| (x - 1.0 / n as f64).abs() < 1e-12));
        }
        let p = sym_probabilities(&SymPovmSpec::new(2, 0.0).unwrap(), &SchmidtState::new(0.0).unwrap());
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
        let spec = SymPovmSpec::new(3, 0.0).unwrap();
        let state = SchmidtState::new(FRAC_PI_8).unwrap();
        let generic = dual_map(&state, &build_sym_povm(&spec)).unwrap().probabilities();
        for (a, b) in sym_probabilities(&spec, &state).iter().zip(generic) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ensemble_limits() {
        let spec = SymPovmSpec::new(5, 0.2).unwrap();
        let ens = sym_ensemble(&spec, &SchmidtState::maximally_entangled()).unwrap();
        for (e, xi) in ens.entries().iter().zip(spec.states()) {
            assert!((e.pure.unwrap().fidelity(&xi) - 1.0).abs() < 1e-12);
        }
        let ens = sym_ensemble(&spec, &SchmidtState::new(0.0).unwrap()).unwrap();
        assert_eq!(ens.len(), 1);
        assert!((ens.entries()[0].pure.unwrap().fidelity(&PureState::zero()) - 1.0).abs() < 1e-15);
        assert!((ens.entries()[0].probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn n2_rotated_is_b92() {
        let state = SchmidtState::new(FRAC_PI_8).unwrap();
        let ens = sym_ensemble(&SymPovmSpec::new(2, FRAC_PI_2).unwrap(), &state).unwrap();
        let (c, s) = state.coefficients();
        let b92 = [PureState::real(c, s).unwrap(), PureState::real(c, -s).unwrap()];
        for (e, t) in ens.entries().iter().zip(b92) {
            assert!((e.probability - 0.5).abs() < 1e-15);
            assert!((e.pure.unwrap().fidelity(&t) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gamma_optimization_small_cases() {
        let zero = gamma_optimized_coherence(3, &SchmidtState::new(0.0).unwrap()).unwrap();
        assert!(zero.coherence.abs() < 1e-12);
        let r = gamma_optimized_coherence(3, &SchmidtState::maximally_entangled()).unwrap();
        assert!((r.optimal_gamma - PI / 3.0).abs() < 1e-3);
        assert!(r.sandwich_holds());
        assert!((r.holevo - 1.0).abs() < 1e-9);
    }

    #[test]
    fn asymptotic_split_requires_large_n() {
        assert!(asymptotic_split(&SchmidtState::new(0.3).unwrap(), 32).is_err());
        let s = asymptotic_split(&SchmidtState::new(0.0).unwrap(), 64).unwrap();
        assert!(s.coherence.abs() < 1e-12 && s.i_acc.abs() < 1e-12 && s.residual < 1e-12);
    }

    #[test]
    fn profile_matches_objective() {
        let ens = sym_ensemble(
            &SymPovmSpec::new(4, FRAC_PI_4).unwrap(),
            &SchmidtState::new(0.5).unwrap(),
        )
        .unwrap();
        let prof = basis_profile(&ens, &[0.0, 1.0]);
        let direct =
            crate::coherence::ensemble_coherence_in_basis(&ens, &crate::qubit::MeasurementBasis::real(1.0).unwrap());
        assert!((prof[1] - direct).abs() < 1e-12);
    }
}
