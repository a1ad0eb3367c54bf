//! Two-qubit Schmidt states, POVMs on Alice's qubit and the ensembles Bob
//! observes when she measures.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::optimize::coordinate_search;
use crate::qubit::{
    eigen2, h2, matrix_sqrt_psd, orthonormal_columns, shannon_entropy, DensityOperator, Mat2, MeasurementBasis,
    PureState, C64, MATRIX_TOL, STATE_TOL,
};

/// Probability below which an ensemble entry is dropped.
pub const DROP_PROBABILITY: f64 = 1e-12;
/// Tolerance on `Σ pᵢ = 1` for ensembles.
pub const PROBABILITY_TOL: f64 = 1e-10;

/// `cos α |00⟩ + sin α |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtState {
    alpha: f64,
}

impl SchmidtState {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || !(-STATE_TOL..=FRAC_PI_2 + STATE_TOL).contains(&alpha) {
            return Err(Error::Domain {
                what: "alpha",
                value: alpha,
                domain: "[0, pi/2]",
            });
        }
        Ok(SchmidtState {
            alpha: alpha.clamp(0.0, FRAC_PI_2),
        })
    }

    pub fn maximally_entangled() -> Self {
        SchmidtState { alpha: FRAC_PI_4 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Schmidt coefficients `(cos α, sin α)`.
    pub fn coefficients(&self) -> (f64, f64) {
        (self.alpha.cos(), self.alpha.sin())
    }

    /// Squared Schmidt coefficients `λ₀ = cos²α`, `λ₁ = 1 − λ₀`.
    pub fn lambdas(&self) -> [f64; 2] {
        let (c, s) = self.coefficients();
        [c * c, s * s]
    }

    /// Reduced state of either qubit; diagonal in the Schmidt basis.
    pub fn reduced(&self) -> DensityOperator {
        let [l0, _] = self.lambdas();
        DensityOperator::diagonal(l0).expect("Schmidt weights form a distribution")
    }
}

/// Entanglement entropy of a Schmidt state in bits.
pub fn entanglement(state: &SchmidtState) -> f64 {
    h2(state.lambdas()[0])
}

/// Inverts [`entanglement`] on the branch `α ∈ [0, π/4]`.
pub fn alpha_for_entanglement(e: f64) -> Result<SchmidtState> {
    if !e.is_finite() || !(0.0..=1.0).contains(&e) {
        return Err(Error::Domain {
            what: "entanglement",
            value: e,
            domain: "[0, 1]",
        });
    }
    if e == 0.0 {
        return SchmidtState::new(0.0);
    }
    if e == 1.0 {
        return Ok(SchmidtState::maximally_entangled());
    }
    // h₂(cos²α) increases strictly on [0, π/4].
    let (mut lo, mut hi) = (0.0f64, FRAC_PI_4);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h2(mid.cos().powi(2)) < e {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let pick = if (h2(lo.cos().powi(2)) - e).abs() <= (h2(hi.cos().powi(2)) - e).abs() {
        lo
    } else {
        hi
    };
    SchmidtState::new(pick)
}

/// A finite POVM on one qubit. Rank-1 POVMs also keep their `(weight, state)`
/// form so that induced ensembles can be built from state vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<Mat2>,
    rank1: Option<Vec<(f64, PureState)>>,
}

impl Povm {
    pub fn new(elements: Vec<Mat2>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Invariant("POVM has no elements".into()));
        }
        for m in &elements {
            if !m.is_hermitian(MATRIX_TOL) {
                return Err(Error::Invariant("POVM element is not Hermitian".into()));
            }
            let low = eigen2(m).values[1];
            if low < -MATRIX_TOL {
                return Err(Error::Negative(low));
            }
        }
        let total: Mat2 = elements.iter().copied().sum();
        let dev = total.max_abs_diff(&Mat2::identity());
        if dev > MATRIX_TOL {
            return Err(Error::IncompletePovm(dev));
        }
        Ok(Povm {
            elements: elements.iter().map(Mat2::hermitian_part).collect(),
            rank1: None,
        })
    }

    /// POVM `{wₖ |φₖ⟩⟨φₖ|}`.
    pub fn from_rank1(parts: Vec<(f64, PureState)>) -> Result<Self> {
        if let Some(&(w, _)) = parts.iter().find(|(w, _)| !w.is_finite() || *w <= 0.0) {
            return Err(Error::Domain {
                what: "rank-1 POVM weight",
                value: w,
                domain: "(0, inf)",
            });
        }
        let elements = parts.iter().map(|(w, s)| s.projector().scale(*w)).collect();
        let mut povm = Povm::new(elements)?;
        povm.rank1 = Some(parts);
        Ok(povm)
    }

    /// Von Neumann measurement in `basis`.
    pub fn projective(basis: &MeasurementBasis) -> Self {
        Povm::from_rank1(vec![(1.0, basis.e1()), (1.0, basis.e2())]).expect("orthonormal basis is complete")
    }

    pub fn computational() -> Self {
        Self::projective(&MeasurementBasis::computational())
    }

    pub fn hadamard() -> Self {
        Self::projective(&MeasurementBasis::hadamard())
    }

    /// The one-outcome measurement `{𝟙}`.
    pub fn trivial() -> Self {
        Povm {
            elements: vec![Mat2::identity()],
            rank1: None,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn rank1(&self) -> Option<&[(f64, PureState)]> {
        self.rank1.as_deref()
    }

    /// Outcome probabilities `tr(Mᵢρ)`, clamped at zero.
    pub fn probabilities(&self, rho: &DensityOperator) -> Vec<f64> {
        self.elements.iter().map(|m| rho.born(m).max(0.0)).collect()
    }

    /// Reorders elements: the new element `k` is the old element `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len()
            || order
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::Invariant("not a permutation of the POVM elements".into()));
        }
        Ok(Povm {
            elements: order.iter().map(|&i| self.elements[i]).collect(),
            rank1: self.rank1.as_ref().map(|r| order.iter().map(|&i| r[i]).collect()),
        })
    }
}

/// One member of an ensemble. `pure` carries the state vector whenever the
/// state is known to be pure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleEntry {
    pub probability: f64,
    pub state: DensityOperator,
    pub pure: Option<PureState>,
}

/// A finite ensemble `{pᵢ, ρᵢ}` of qubit states.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    entries: Vec<EnsembleEntry>,
}

fn check_sum(probs: impl Iterator<Item = f64>) -> Result<()> {
    let total: f64 = probs.sum();
    if (total - 1.0).abs() > PROBABILITY_TOL {
        return Err(Error::ProbabilitySum(total));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !p.is_finite() || !(0.0..=1.0 + PROBABILITY_TOL).contains(&p) {
        return Err(Error::Domain {
            what: "probability",
            value: p,
            domain: "[0, 1]",
        });
    }
    Ok(())
}

impl Ensemble {
    /// Mixed-state ensemble. States whose smaller eigenvalue is negligible are
    /// flagged pure.
    pub fn new(entries: Vec<(f64, DensityOperator)>) -> Result<Self> {
        for &(p, _) in &entries {
            check_probability(p)?;
        }
        check_sum(entries.iter().map(|e| e.0))?;
        let entries = entries
            .into_iter()
            .filter(|(p, _)| *p > DROP_PROBABILITY)
            .map(|(probability, state)| {
                let eig = state.eigen();
                let pure = (eig.values[1] <= 1e-14).then_some(eig.vectors[0]);
                EnsembleEntry {
                    probability,
                    state,
                    pure,
                }
            })
            .collect();
        Ok(Ensemble { entries })
    }

    pub fn from_pure(entries: Vec<(f64, PureState)>) -> Result<Self> {
        for &(p, _) in &entries {
            check_probability(p)?;
        }
        check_sum(entries.iter().map(|e| e.0))?;
        Ok(Ensemble {
            entries: entries
                .into_iter()
                .filter(|(p, _)| *p > DROP_PROBABILITY)
                .map(|(probability, psi)| EnsembleEntry {
                    probability,
                    state: DensityOperator::from_pure(&psi),
                    pure: Some(psi),
                })
                .collect(),
        })
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.probability).collect()
    }

    pub fn is_all_pure(&self) -> bool {
        self.entries.iter().all(|e| e.pure.is_some())
    }

    /// True when every state has real matrix elements.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|e| e.state.is_real(STATE_TOL))
    }

    /// Average state `Σ pᵢ ρᵢ`.
    pub fn average(&self) -> Mat2 {
        self.entries.iter().map(|e| e.state.matrix().scale(e.probability)).sum()
    }

    /// Applies a common unitary to every member.
    pub fn conjugated(&self, v: &Mat2) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Ok(match e.pure {
                    Some(psi) => {
                        let a = v.apply(&psi.amplitudes());
                        let psi = PureState::normalized(a[0], a[1])?;
                        EnsembleEntry {
                            probability: e.probability,
                            state: DensityOperator::from_pure(&psi),
                            pure: Some(psi),
                        }
                    }
                    None => EnsembleEntry {
                        probability: e.probability,
                        state: e.state.conjugated(v)?,
                        pure: None,
                    },
                })
            })
            .collect::<Result<_>>()?;
        Ok(Ensemble { entries })
    }

    /// Merges entries whose states coincide (pure fidelity above `1 − 1e-12`,
    /// or equal matrices for mixed states), summing their probabilities and
    /// keeping the first occurrence's position.
    pub fn merge_duplicates(self) -> Self {
        let mut out: Vec<EnsembleEntry> = Vec::with_capacity(self.entries.len());
        for e in self.entries {
            let twin = out.iter_mut().find(|o| match (o.pure, e.pure) {
                (Some(a), Some(b)) => a.fidelity(&b) > 1.0 - 1e-12,
                (None, None) => o.state.matrix().max_abs_diff(e.state.matrix()) <= 1e-12,
                _ => false,
            });
            match twin {
                Some(o) => o.probability += e.probability,
                None => out.push(e),
            }
        }
        Ensemble { entries: out }
    }
}

/// Ensemble Bob holds after Alice measures `povm` on her half of `state`.
///
/// Outcome `i` occurs with `pᵢ = tr(σ_A Mᵢ)` and leaves Bob in
/// `ρᵢ = √σ_B Mᵢᵀ √σ_B / pᵢ`, the transpose taken in the Schmidt basis.
/// Outcomes with `pᵢ ≤ 1e-12` are dropped.
pub fn dual_map(state: &SchmidtState, povm: &Povm) -> Result<Ensemble> {
    let sigma_a = state.reduced();
    let sqrt_b = matrix_sqrt_psd(state.reduced().matrix())?;
    let mut entries = Vec::with_capacity(povm.len());
    for (k, m) in povm.elements().iter().enumerate() {
        let p = sigma_a.born(m);
        if p <= DROP_PROBABILITY {
            continue;
        }
        let entry = match povm.rank1() {
            Some(parts) => {
                let a = sqrt_b.apply(&parts[k].1.conj().amplitudes());
                let psi = PureState::normalized(a[0], a[1])?;
                EnsembleEntry {
                    probability: p,
                    state: DensityOperator::from_pure(&psi),
                    pure: Some(psi),
                }
            }
            None => {
                let state = DensityOperator::from_positive(sqrt_b * m.transpose() * sqrt_b)?;
                let eig = state.eigen();
                EnsembleEntry {
                    probability: p,
                    state,
                    pure: (eig.values[1] <= 1e-14).then_some(eig.vectors[0]),
                }
            }
        };
        entries.push(entry);
    }
    check_sum(entries.iter().map(|e| e.probability))?;
    Ok(Ensemble { entries })
}

/// Entropy of the outcome distribution of `povm` on `rho`.
pub fn measurement_entropy(povm: &Povm, rho: &DensityOperator) -> f64 {
    shannon_entropy(povm.probabilities(rho))
}

/// A pure-state decomposition `σ = Σ pₖ |φₖ⟩⟨φₖ|` found by
/// [`povm_uncertainty_decomposition`].
#[derive(Debug, Clone, PartialEq)]
pub struct Uncertainty {
    pub value: f64,
    pub decomposition: Vec<(f64, PureState)>,
}

/// Decomposition of `σ = diag(λ₀, λ₁)` induced by a K×2 isometry `v`:
/// `√pₖ |φₖ⟩ = Σⱼ vₖⱼ √λⱼ |j⟩`.
pub fn decomposition_from_isometry(lambdas: [f64; 2], rows: &[[C64; 2]]) -> Vec<(f64, PureState)> {
    let r = [lambdas[0].max(0.0).sqrt(), lambdas[1].max(0.0).sqrt()];
    rows.iter()
        .filter_map(|row| {
            let a = [row[0] * r[0], row[1] * r[1]];
            let p = a[0].norm_sqr() + a[1].norm_sqr();
            (p > 1e-300).then(|| (p, PureState::normalized(a[0], a[1]).expect("nonzero")))
        })
        .collect()
}

/// Average outcome entropy of `povm` over a pure-state decomposition.
pub fn decomposition_entropy(povm: &Povm, decomposition: &[(f64, PureState)]) -> f64 {
    decomposition
        .iter()
        .map(|(p, psi)| p * measurement_entropy(povm, &DensityOperator::from_pure(psi)))
        .sum()
}

const UNCERTAINTY_STARTS: usize = 64;
const UNCERTAINTY_SEED: u64 = 0x5eed_0007;

fn rows_from_params(x: &[f64]) -> Vec<[C64; 2]> {
    x.chunks_exact(4)
        .map(|c| [C64::new(c[0], c[1]), C64::new(c[2], c[3])])
        .collect()
}

/// Minimum over pure-state decompositions of `σ_A` of the average outcome
/// entropy of `povm`, together with the minimizing decomposition.
///
/// Decompositions with K elements are the rows of K×2 isometries; K = 2 and
/// K = 3 are searched with 64 seeded starts each, plus the eigendecomposition.
pub fn povm_uncertainty_decomposition(povm: &Povm, state: &SchmidtState) -> Uncertainty {
    let lambdas = state.lambdas();
    let eigen = decomposition_from_isometry(
        lambdas,
        &[
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ],
    );
    let mut best = Uncertainty {
        value: decomposition_entropy(povm, &eigen),
        decomposition: eigen,
    };
    if lambdas[1] <= 1e-15 || lambdas[0] <= 1e-15 {
        // σ_A is pure: its only decomposition is itself.
        return best;
    }

    let objective = |x: &[f64]| match orthonormal_columns(&rows_from_params(x)) {
        Some(rows) => decomposition_entropy(povm, &decomposition_from_isometry(lambdas, &rows)),
        None => f64::INFINITY,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(UNCERTAINTY_SEED);
    for k in [2usize, 3] {
        for _ in 0..UNCERTAINTY_STARTS {
            let x0: Vec<f64> = (0..4 * k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let m = coordinate_search(objective, x0, 1.0, 9, 1e-9, 60);
            if m.value < best.value {
                let rows = orthonormal_columns(&rows_from_params(&m.x)).expect("finite objective");
                best = Uncertainty {
                    value: m.value,
                    decomposition: decomposition_from_isometry(lambdas, &rows),
                };
            }
        }
    }
    best
}

/// Uncertainty of `povm` with respect to the bipartite state, in bits.
pub fn povm_uncertainty(povm: &Povm, state: &SchmidtState) -> f64 {
    povm_uncertainty_decomposition(povm, state).value
}
