//! Exact 2×2 complex linear algebra and entropy primitives.
//!
//! Everything here works in dimension two. Matrices are stored densely as
//! `[[Complex64; 2]; 2]` and every decomposition is closed-form.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for state normalization and density-operator checks.
pub const STATE_TOL: f64 = 1e-12;
/// Tolerance for PSD/Hermitian checks on matrices built by arithmetic.
pub const MATRIX_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const fn zero() -> Self {
        Mat2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Mat2([[C64::new(a, 0.0), ZERO], [ZERO, C64::new(b, 0.0)]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Mat2([
            [C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)],
            [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)],
        ])
    }

    pub fn pauli_x() -> Self {
        Self::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        Mat2([[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::diag(1.0, -1.0)
    }

    /// `|a⟩⟨b|`
    pub fn outer(a: &[C64; 2], b: &[C64; 2]) -> Self {
        Mat2([
            [a[0] * b[0].conj(), a[0] * b[1].conj()],
            [a[1] * b[0].conj(), a[1] * b[1].conj()],
        ])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn apply(&self, v: &[C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Largest entry-wise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// `(M + M†)/2`, with an exactly real diagonal.
    pub fn hermitian_part(&self) -> Self {
        let m = &self.0;
        let off = (m[0][1] + m[1][0].conj()) * 0.5;
        Mat2([
            [C64::new(m[0][0].re, 0.0), off],
            [off.conj(), C64::new(m[1][1].re, 0.0)],
        ])
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.0.iter().flatten().all(|z| z.im.abs() <= tol)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl std::iter::Sum for Mat2 {
    fn sum<I: Iterator<Item = Mat2>>(iter: I) -> Mat2 {
        iter.fold(Mat2::zero(), |acc, m| acc + m)
    }
}

/// Normalized single-qubit state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amp: [C64; 2],
}

impl PureState {
    /// Accepts amplitudes that are already normalized to within [`STATE_TOL`].
    pub fn new(amp0: C64, amp1: C64) -> Result<Self> {
        let norm = amp0.norm_sqr() + amp1.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::Invariant(format!("state norm² is {norm}, expected 1")));
        }
        Ok(PureState { amp: [amp0, amp1] })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amp0: C64, amp1: C64) -> Result<Self> {
        let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::Invariant("cannot normalize the zero vector".into()));
        }
        Ok(PureState {
            amp: [amp0 / norm, amp1 / norm],
        })
    }

    /// Real state `c|0⟩ + s|1⟩`, rescaled to unit norm.
    pub fn real(c: f64, s: f64) -> Result<Self> {
        Self::normalized(C64::new(c, 0.0), C64::new(s, 0.0))
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        PureState {
            amp: [C64::new(c, 0.0), C64::from_polar(s, phi)],
        }
    }

    pub fn zero() -> Self {
        PureState { amp: [ONE, ZERO] }
    }

    pub fn one() -> Self {
        PureState { amp: [ZERO, ONE] }
    }

    pub fn plus() -> Self {
        PureState {
            amp: [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)],
        }
    }

    pub fn minus() -> Self {
        PureState {
            amp: [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0)],
        }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.amp
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amp[0].conj() * other.amp[0] + self.amp[1].conj() * other.amp[1]
    }

    /// `|⟨self|other⟩|²`
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn projector(&self) -> Mat2 {
        Mat2::outer(&self.amp, &self.amp)
    }

    pub fn conj(&self) -> Self {
        PureState {
            amp: [self.amp[0].conj(), self.amp[1].conj()],
        }
    }

    /// The state orthogonal to this one, `-a₁*|0⟩ + a₀*|1⟩`.
    pub fn orthogonal(&self) -> Self {
        PureState {
            amp: [-self.amp[1].conj(), self.amp[0].conj()],
        }
    }

    /// Bloch vector `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let [a, b] = self.amp;
        let cross = a.conj() * b;
        [2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()]
    }

    /// True when the state is real up to a global phase.
    pub fn is_real(&self, tol: f64) -> bool {
        let [a, b] = self.amp;
        (a.conj() * b).im.abs() <= tol
    }
}

/// Hermitian, positive-semidefinite, unit-trace 2×2 operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityOperator(Mat2);

impl DensityOperator {
    pub fn new(m: Mat2) -> Result<Self> {
        if m.0.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invariant("non-finite matrix entry".into()));
        }
        if !m.is_hermitian(STATE_TOL) {
            return Err(Error::Invariant("density operator is not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::Invariant(format!("density operator trace is {tr}")));
        }
        let h = m.hermitian_part();
        let low = eigen2(&h).values[1];
        if low < -STATE_TOL {
            return Err(Error::Negative(low));
        }
        Ok(DensityOperator(h))
    }

    /// Normalizes a PSD matrix by its trace. Used where the matrix is known to be
    /// a positive operator up to rounding.
    pub(crate) fn from_positive(m: Mat2) -> Result<Self> {
        let h = m.hermitian_part();
        let tr = h.trace().re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::Invariant(format!("operator trace {tr} is not positive")));
        }
        Self::new(h.scale(1.0 / tr))
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityOperator(psi.projector().hermitian_part())
    }

    pub fn maximally_mixed() -> Self {
        DensityOperator(Mat2::diag(0.5, 0.5))
    }

    pub fn diagonal(p0: f64) -> Result<Self> {
        Self::new(Mat2::diag(p0, 1.0 - p0))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        let m = &self.0 .0;
        [2.0 * m[1][0].re, 2.0 * m[1][0].im, m[0][0].re - m[1][1].re]
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        let r = self.bloch_vector();
        0.5 * (1.0 + r[0] * r[0] + r[1] * r[1] + r[2] * r[2])
    }

    pub fn eigen(&self) -> Eigen2 {
        eigen2(&self.0)
    }

    /// Expectation `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &PureState) -> f64 {
        let a = psi.amplitudes();
        let v = self.0.apply(&a);
        (a[0].conj() * v[0] + a[1].conj() * v[1]).re
    }

    /// Born probability `tr(Mρ)` for an arbitrary operator.
    pub fn born(&self, m: &Mat2) -> f64 {
        (*m * self.0).trace().re
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.0.is_real(tol)
    }

    /// Conjugation `VρV†` by a unitary.
    pub fn conjugated(&self, v: &Mat2) -> Result<Self> {
        Self::from_positive(*v * self.0 * v.adjoint())
    }
}

/// An orthonormal qubit basis `{|e₁⟩, |e₂⟩}` in Bloch-angle form:
/// `|e₁⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(-STATE_TOL..=PI + STATE_TOL).contains(&theta) {
            return Err(Error::Domain {
                what: "theta",
                value: theta,
                domain: "[0, pi]",
            });
        }
        if !phi.is_finite() {
            return Err(Error::Domain {
                what: "phi",
                value: phi,
                domain: "finite",
            });
        }
        Ok(MeasurementBasis {
            theta: theta.clamp(0.0, PI),
            phi: phi.rem_euclid(TAU),
        })
    }

    /// Real-plane basis, `φ = 0`.
    pub fn real(theta: f64) -> Result<Self> {
        Self::new(theta, 0.0)
    }

    pub fn computational() -> Self {
        MeasurementBasis { theta: 0.0, phi: 0.0 }
    }

    pub fn hadamard() -> Self {
        MeasurementBasis {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }

    /// Basis whose first vector has the given Bloch axis.
    pub fn from_axis(n: [f64; 3]) -> Self {
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let z = (n[2] / len).clamp(-1.0, 1.0);
        let phi = if n[0].abs() + n[1].abs() == 0.0 {
            0.0
        } else {
            n[1].atan2(n[0]).rem_euclid(TAU)
        };
        MeasurementBasis { theta: z.acos(), phi }
    }

    pub fn e1(&self) -> PureState {
        PureState::bloch(self.theta, self.phi)
    }

    pub fn e2(&self) -> PureState {
        let (s, c) = (self.theta / 2.0).sin_cos();
        PureState {
            amp: [-C64::from_polar(s, -self.phi), C64::new(c, 0.0)],
        }
    }

    /// Bloch vector of `|e₁⟩`.
    pub fn axis(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// `h₂(x) = −x log₂ x − (1−x) log₂(1−x)`, with out-of-range input clamped.
#[inline]
pub fn h2(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let y = 1.0 - x;
    let mut h = 0.0;
    if x > 0.0 {
        h -= x * x.log2();
    }
    if y > 0.0 {
        h -= y * y.log2();
    }
    h
}

/// Binary entropy in bits. Inputs within 1e-9 outside `[0, 1]` are clamped.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !x.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&x) {
        return Err(Error::Domain {
            what: "probability",
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(h2(x))
}

/// Shannon entropy in bits of a (sub)normalized distribution. Negative
/// rounding residue is ignored.
pub fn shannon_entropy(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs.into_iter().filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    h2(rho.eigen().values[0])
}

/// Eigendecomposition of a Hermitian 2×2 matrix, eigenvalues descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen2 {
    pub values: [f64; 2],
    pub vectors: [PureState; 2],
}

impl Eigen2 {
    pub fn reconstruct(&self) -> Mat2 {
        self.vectors[0].projector().scale(self.values[0]) + self.vectors[1].projector().scale(self.values[1])
    }
}

/// Closed-form eigendecomposition. Only the Hermitian part of `h` is used.
/// Degenerate input returns the computational basis.
pub fn eigen2(h: &Mat2) -> Eigen2 {
    let m = &h.0;
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = (m[0][1] + m[1][0].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = half.hypot(b.norm());
    let values = [mean + r, mean - r];
    let scale = a.abs() + d.abs() + b.norm();

    if r <= 1e-15 * scale || r == 0.0 {
        return Eigen2 {
            values,
            vectors: [PureState::zero(), PureState::one()],
        };
    }
    if b.norm() == 0.0 {
        let vectors = if a >= d {
            [PureState::zero(), PureState::one()]
        } else {
            [PureState::one(), PureState::zero()]
        };
        return Eigen2 { values, vectors };
    }
    // Pick whichever row of (h − λ₊) gives the better conditioned null vector.
    let top = if half >= 0.0 {
        PureState::normalized(C64::new(r + half, 0.0), b.conj())
    } else {
        PureState::normalized(b, C64::new(r - half, 0.0))
    }
    .expect("eigenvector has norm at least r > 0");
    Eigen2 {
        values,
        vectors: [top, top.orthogonal()],
    }
}

/// Principal square root of a positive-semidefinite matrix.
pub fn matrix_sqrt_psd(m: &Mat2) -> Result<Mat2> {
    let eig = eigen2(m);
    if eig.values[1] < -MATRIX_TOL {
        return Err(Error::Negative(eig.values[1]));
    }
    let [l0, l1] = eig.values.map(|l| l.max(0.0).sqrt());
    Ok(eig.vectors[0].projector().scale(l0) + eig.vectors[1].projector().scale(l1))
}

/// Gram–Schmidt on the two columns of a K×2 matrix given by rows. The result
/// has orthonormal columns, so its rows define a K-outcome rank-1 POVM and a
/// K-element decomposition of any qubit state. `None` if the columns are
/// linearly dependent.
pub fn orthonormal_columns(rows: &[[C64; 2]]) -> Option<Vec<[C64; 2]>> {
    let norm0: f64 = rows.iter().map(|r| r[0].norm_sqr()).sum::<f64>().sqrt();
    if norm0 < 1e-12 {
        return None;
    }
    let mut out: Vec<[C64; 2]> = rows.iter().map(|r| [r[0] / norm0, r[1]]).collect();
    let proj: C64 = out.iter().map(|r| r[0].conj() * r[1]).sum();
    for r in out.iter_mut() {
        r[1] -= r[0] * proj;
    }
    let norm1: f64 = out.iter().map(|r| r[1].norm_sqr()).sum::<f64>().sqrt();
    if norm1 < 1e-12 {
        return None;
    }
    for r in out.iter_mut() {
        r[1] /= norm1;
    }
    Some(out)
}
