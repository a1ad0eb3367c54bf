//! Holevo quantity, accessible information and the coherence lower bound
//! `χ − I_acc`.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::entangle::{Ensemble, Povm};
use crate::error::{Error, Result};
use crate::optimize::{coordinate_search, scan_maximize, ScanOptions};
use crate::qubit::{
    h2, orthonormal_columns, shannon_entropy, von_neumann_entropy, DensityOperator, Mat2, PureState, C64,
};

/// `S(Σ pᵢρᵢ) − Σ pᵢ S(ρᵢ)`.
pub fn holevo(ens: &Ensemble) -> f64 {
    let avg = DensityOperator::from_positive(ens.average()).expect("ensemble average is a state");
    let mixed: f64 = ens
        .entries()
        .iter()
        .filter(|e| e.pure.is_none())
        .map(|e| e.probability * von_neumann_entropy(&e.state))
        .sum();
    (von_neumann_entropy(&avg) - mixed).max(0.0)
}

fn mutual_information_from_joint(joint: &[Vec<f64>]) -> f64 {
    let k = joint.first().map_or(0, Vec::len);
    let outcome = (0..k).map(|j| joint.iter().map(|row| row[j]).sum::<f64>());
    let h_y = shannon_entropy(outcome);
    let h_y_given_x: f64 = joint
        .iter()
        .map(|row| {
            let px: f64 = row.iter().sum();
            if px > 0.0 {
                px * shannon_entropy(row.iter().map(|p| p / px))
            } else {
                0.0
            }
        })
        .sum();
    (h_y - h_y_given_x).max(0.0)
}

/// Mutual information between the ensemble label and the outcome of `povm`.
pub fn mutual_information(ens: &Ensemble, povm: &Povm) -> f64 {
    let joint: Vec<Vec<f64>> = ens
        .entries()
        .iter()
        .map(|e| {
            povm.probabilities(&e.state)
                .into_iter()
                .map(|q| e.probability * q)
                .collect()
        })
        .collect();
    mutual_information_from_joint(&joint)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AccessMethod {
    AnalyticTwoPure,
    Optimized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccessibleInfoResult {
    pub value: f64,
    pub optimal_povm: Povm,
    pub method: AccessMethod,
}

/// Multi-start settings for the accessible-information optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessSearch {
    /// Starts per POVM size.
    pub starts: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for AccessSearch {
    fn default() -> Self {
        AccessSearch {
            starts: 32,
            tol: 1e-9,
            seed: 0x01ac_ce55,
        }
    }
}

/// `1 − h₂((1 + √(1 − |s|²))/2)` for two equiprobable pure states with overlap
/// modulus `s`.
pub fn two_pure_accessible_information(overlap: f64) -> f64 {
    let s = overlap.clamp(0.0, 1.0);
    1.0 - h2(0.5 * (1.0 + (1.0 - s * s).max(0.0).sqrt()))
}

/// `h₂((1 − |s|)/2)`, the Holevo quantity of two equiprobable pure states.
pub fn two_pure_holevo(overlap: f64) -> f64 {
    h2(0.5 * (1.0 - overlap.clamp(0.0, 1.0)))
}

/// Projective measurement symmetric about the pair, optimal for two
/// equiprobable pure states.
fn two_pure_measurement(a: &PureState, b: &PureState) -> Povm {
    let s = a.inner(b);
    let phase = if s.norm() > 0.0 {
        s / s.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let [a0, a1] = a.amplitudes();
    let [b0, b1] = b.amplitudes();
    let (b0, b1) = (b0 * phase.conj(), b1 * phase.conj());
    let sum = PureState::normalized(a0 + b0, a1 + b1);
    let diff = PureState::normalized(a0 - b0, a1 - b1);
    let (u, v) = match (sum, diff) {
        (Ok(u), Ok(v)) => (u, v),
        // identical states: every measurement carries zero information
        (Ok(u), Err(_)) => (u, u.orthogonal()),
        (Err(_), Ok(v)) => (v.orthogonal(), v),
        (Err(_), Err(_)) => unreachable!("normalized states cannot both vanish"),
    };
    let [u0, u1] = u.amplitudes();
    let [v0, v1] = v.amplitudes();
    let m1 = PureState::normalized(u0 + v0, u1 + v1).expect("u ⟂ v");
    let m2 = PureState::normalized(u0 - v0, u1 - v1).expect("u ⟂ v");
    Povm::from_rank1(vec![(1.0, m1), (1.0, m2)]).expect("orthonormal pair")
}

/// Maximum mutual information over individual measurements.
///
/// Two equiprobable pure states use the closed form. Otherwise the search runs
/// over rank-1 POVMs: real ensembles over XZ-plane POVMs with 2 or 3
/// elements, complex ensembles over POVMs with 2 to 4 elements.
pub fn accessible_information(ens: &Ensemble) -> AccessibleInfoResult {
    accessible_information_with(ens, &AccessSearch::default())
}

pub fn accessible_information_with(ens: &Ensemble, search: &AccessSearch) -> AccessibleInfoResult {
    let entries = ens.entries();
    if entries.len() == 2
        && entries
            .iter()
            .all(|e| e.pure.is_some() && (e.probability - 0.5).abs() <= 1e-12)
    {
        let (a, b) = (entries[0].pure.unwrap(), entries[1].pure.unwrap());
        return AccessibleInfoResult {
            value: two_pure_accessible_information(a.inner(&b).norm()),
            optimal_povm: two_pure_measurement(&a, &b),
            method: AccessMethod::AnalyticTwoPure,
        };
    }
    optimized_accessible_information(ens, search)
}

/// The optimizer path alone, regardless of ensemble shape.
pub fn optimized_accessible_information(ens: &Ensemble, search: &AccessSearch) -> AccessibleInfoResult {
    let povm = if ens.len() <= 1 {
        Povm::trivial()
    } else if ens.is_real() {
        real_plane_search(ens, search)
    } else {
        complex_search(ens, search)
    };
    AccessibleInfoResult {
        value: mutual_information(ens, &povm),
        optimal_povm: povm,
        method: AccessMethod::Optimized,
    }
}

/// Mutual information of an XZ-plane rank-1 POVM `{wₖ |m(tₖ)⟩⟨m(tₖ)|}`,
/// evaluated through Bloch vectors.
struct PlaneObjective {
    terms: Vec<(f64, f64, f64)>,
}

impl PlaneObjective {
    fn new(ens: &Ensemble) -> Self {
        PlaneObjective {
            terms: ens
                .entries()
                .iter()
                .map(|e| {
                    let r = e.state.bloch_vector();
                    (e.probability, r[0], r[2])
                })
                .collect(),
        }
    }

    fn value(&self, weights: &[f64], angles: &[f64]) -> f64 {
        let dirs: Vec<(f64, f64)> = angles.iter().map(|t| t.sin_cos()).collect();
        let joint: Vec<Vec<f64>> = self
            .terms
            .iter()
            .map(|&(p, rx, rz)| {
                weights
                    .iter()
                    .zip(&dirs)
                    .map(|(w, (s, c))| (p * w * 0.5 * (1.0 + s * rx + c * rz)).max(0.0))
                    .collect()
            })
            .collect();
        mutual_information_from_joint(&joint)
    }
}

/// Weights making `Σ wₖ |m(tₖ)⟩⟨m(tₖ)| = 𝟙` for three XZ-plane directions.
fn trine_weights(t: &[f64]) -> Option<[f64; 3]> {
    let (s, c): (Vec<f64>, Vec<f64>) = t.iter().map(|x| x.sin_cos()).unzip();
    // rows: Σw = 2, Σw sin t = 0, Σw cos t = 0
    let det = s[1] * c[2] - s[2] * c[1] - (s[0] * c[2] - s[2] * c[0]) + (s[0] * c[1] - s[1] * c[0]);
    if det.abs() < 1e-12 {
        return None;
    }
    let w = [
        2.0 * (s[1] * c[2] - s[2] * c[1]) / det,
        -2.0 * (s[0] * c[2] - s[2] * c[0]) / det,
        2.0 * (s[0] * c[1] - s[1] * c[0]) / det,
    ];
    w.iter().all(|&x| x >= 0.0).then_some(w)
}

fn plane_povm(weights: &[f64], angles: &[f64]) -> Povm {
    let parts: Vec<(f64, PureState)> = weights
        .iter()
        .zip(angles)
        .filter(|(w, _)| **w > 1e-15)
        .map(|(&w, &t)| (w, PureState::bloch(t.rem_euclid(2.0 * PI), 0.0)))
        .collect();
    Povm::from_rank1(parts).expect("weights solve the completeness system")
}

fn real_plane_search(ens: &Ensemble, search: &AccessSearch) -> Povm {
    let objective = PlaneObjective::new(ens);

    // Projective: axis angle t and t + π give the same measurement.
    let projective = scan_maximize(
        |t| objective.value(&[1.0, 1.0], &[t, t + PI]),
        0.0,
        PI,
        &ScanOptions::new(1024, search.tol),
    );
    let mut best_value = projective.value;
    let mut best = plane_povm(&[1.0, 1.0], &[projective.x, projective.x + PI]);

    let trine = |x: &[f64]| match trine_weights(x) {
        Some(w) => -objective.value(&w, x),
        None => 1.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    for _ in 0..search.starts {
        let x0: Vec<f64> = loop {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
            if trine_weights(&x).is_some() {
                break x;
            }
        };
        let m = coordinate_search(trine, x0, PI, 33, search.tol, 200);
        if -m.value > best_value {
            if let Some(w) = trine_weights(&m.x) {
                best_value = -m.value;
                best = plane_povm(&w, &m.x);
            }
        }
    }
    best
}

/// Rank-1 POVM from the rows of a K×2 isometry: element `k` is
/// `|rₖ*⟩⟨rₖ*|` with `rₖ` the k-th row.
pub fn povm_from_isometry(rows: &[[C64; 2]]) -> Result<Povm> {
    let parts: Vec<(f64, PureState)> = rows
        .iter()
        .filter_map(|r| {
            let w = r[0].norm_sqr() + r[1].norm_sqr();
            (w > 1e-15).then(|| PureState::normalized(r[0].conj(), r[1].conj()).map(|s| (w, s)))
        })
        .collect::<Result<_>>()?;
    Povm::from_rank1(parts)
}

fn complex_search(ens: &Ensemble, search: &AccessSearch) -> Povm {
    let rows = |x: &[f64]| -> Vec<[C64; 2]> {
        x.chunks_exact(4)
            .map(|c| [C64::new(c[0], c[1]), C64::new(c[2], c[3])])
            .collect()
    };
    let objective = |x: &[f64]| {
        orthonormal_columns(&rows(x))
            .and_then(|v| povm_from_isometry(&v).ok())
            .map_or(1.0, |p| -mutual_information(ens, &p))
    };
    let mut best = Povm::trivial();
    let mut best_value = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    for k in 2..=4usize {
        for _ in 0..search.starts {
            let x0: Vec<f64> = (0..4 * k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let m = coordinate_search(objective, x0, 1.0, 9, search.tol, 100);
            if -m.value > best_value {
                if let Some(p) = orthonormal_columns(&rows(&m.x)).and_then(|v| povm_from_isometry(&v).ok()) {
                    best_value = -m.value;
                    best = p;
                }
            }
        }
    }
    best
}

/// `max(0, χ − I_acc)`.
pub fn coherence_lower_bound(ens: &Ensemble) -> f64 {
    (holevo(ens) - accessible_information(ens).value).max(0.0)
}

/// Unambiguous discrimination of two pure states.
#[derive(Debug, Clone, PartialEq)]
pub struct UsdMeasurement {
    /// Elements `[M₁, M₂, M_?]`.
    pub povm: Povm,
    /// Success probability `1 − |⟨ψ₁|ψ₂⟩|` for equiprobable inputs.
    pub p_conclusive: f64,
    /// Set when the states coincide; then `M_? = 𝟙`.
    pub degenerate: bool,
}

/// `M₁ = q(𝟙 − |ψ₂⟩⟨ψ₂|)`, `M₂ = q(𝟙 − |ψ₁⟩⟨ψ₁|)`, `M_? = 𝟙 − M₁ − M₂`
/// with `q = 1/(1 + |⟨ψ₁|ψ₂⟩|)`.
pub fn usd_povm(psi1: &PureState, psi2: &PureState) -> Result<UsdMeasurement> {
    let s = psi1.inner(psi2).norm();
    if !s.is_finite() {
        return Err(Error::Invariant("non-finite overlap".into()));
    }
    if s >= 1.0 - 1e-12 {
        log::warn!("USD requested for identical states; every outcome is inconclusive");
        return Ok(UsdMeasurement {
            povm: Povm::new(vec![Mat2::zero(), Mat2::zero(), Mat2::identity()])?,
            p_conclusive: 0.0,
            degenerate: true,
        });
    }
    let q = 1.0 / (1.0 + s);
    let m1 = (Mat2::identity() - psi2.projector()).scale(q);
    let m2 = (Mat2::identity() - psi1.projector()).scale(q);
    let inconclusive = Mat2::identity() - m1 - m2;
    Ok(UsdMeasurement {
        povm: Povm::new(vec![m1, m2, inconclusive])?,
        p_conclusive: 1.0 - s,
        degenerate: false,
    })
}
