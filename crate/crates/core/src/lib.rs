//! Ensemble coherence generated from two-qubit entanglement.
//!
//! Alice measures her half of `cos α|00⟩ + sin α|11⟩` with a POVM; Bob is left
//! with an ensemble of states whose basis-free coherence, Holevo quantity and
//! accessible information this crate computes. Two families of measurements
//! are covered: the Hadamard measurement (giving the B92 pair) and symmetric
//! N-outcome observables rotated by an angle `γ`.
//!
//! All entropies are in bits.

pub mod coherence;
pub mod entangle;
pub mod error;
pub mod infotheory;
pub mod optimize;
pub mod qubit;
pub mod sweep;
pub mod sympovm;

pub use coherence::{
    basis_free_coherence, basis_free_coherence_with, ensemble_coherence_in_basis, perturb_ensemble,
    relative_entropy_coherence, BasisSearch, CoherenceResult,
};
pub use entangle::{
    alpha_for_entanglement, dual_map, entanglement, measurement_entropy, povm_uncertainty, Ensemble, Povm, SchmidtState,
};
pub use error::{Error, Result};
pub use infotheory::{
    accessible_information, accessible_information_with, coherence_lower_bound, holevo, mutual_information, usd_povm,
    AccessMethod, AccessSearch, AccessibleInfoResult,
};
pub use qubit::{
    binary_entropy, eigen2, matrix_sqrt_psd, von_neumann_entropy, DensityOperator, Mat2, MeasurementBasis, PureState,
};
pub use sympovm::{
    asymptotic_split, build_sym_povm, gamma_optimized_coherence, gamma_optimized_coherence_with, sym_ensemble,
    sym_probabilities, GammaSearch, Settings, SweepRecord, SymPovmSpec,
};
