//! Reference computations written directly from the defining formulas, kept
//! free of calls into the crate so they can act as independent oracles.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Binary entropy in bits.
pub fn h2(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Entanglement of `cos α|00⟩ + sin α|11⟩`.
pub fn schmidt_entropy(alpha: f64) -> f64 {
    h2(alpha.cos().powi(2))
}

/// A real qubit state as a Bloch vector in the x–z plane.
#[derive(Debug, Clone, Copy)]
pub struct PlaneState {
    pub x: f64,
    pub z: f64,
}

impl PlaneState {
    pub fn pure(angle: f64) -> Self {
        PlaneState {
            x: angle.sin(),
            z: angle.cos(),
        }
    }

    pub fn length(&self) -> f64 {
        self.x.hypot(self.z)
    }

    pub fn entropy(&self) -> f64 {
        h2((1.0 + self.length().min(1.0)) / 2.0)
    }

    /// Relative entropy of coherence in the real basis at Bloch angle `theta`.
    pub fn coherence(&self, theta: f64) -> f64 {
        let proj = self.x * theta.sin() + self.z * theta.cos();
        h2((1.0 + proj) / 2.0) - self.entropy()
    }
}

/// Average coherence of a weighted set of plane states in basis `theta`.
pub fn ensemble_coherence(members: &[(f64, PlaneState)], theta: f64) -> f64 {
    members.iter().map(|(p, s)| p * s.coherence(theta)).sum()
}

/// Brute-force minimum over `points` evenly spaced basis angles in `[0, π]`.
pub fn grid_min_coherence(members: &[(f64, PlaneState)], points: usize) -> (f64, f64) {
    (0..points)
        .map(|k| PI * k as f64 / (points - 1) as f64)
        .map(|t| (ensemble_coherence(members, t), t))
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
}

/// The pair `cos α|0⟩ ± sin α|1⟩` with equal weights.
pub fn b92_members(alpha: f64) -> Vec<(f64, PlaneState)> {
    vec![
        (0.5, PlaneState::pure(2.0 * alpha)),
        (0.5, PlaneState::pure(-2.0 * alpha)),
    ]
}

/// Holevo quantity of two equiprobable pure states with overlap modulus `s`.
pub fn two_pure_holevo(s: f64) -> f64 {
    h2((1.0 + s) / 2.0)
}

/// Accessible information of two equiprobable pure states, achieved by the
/// symmetric projective measurement.
pub fn two_pure_accessible(s: f64) -> f64 {
    1.0 - h2((1.0 + (1.0 - s * s).sqrt()) / 2.0)
}

/// Symmetric-observable outcome probabilities from their closed form.
pub fn sym_probabilities(n: usize, gamma: f64, alpha: f64) -> Vec<f64> {
    let (c2, s2) = (alpha.cos().powi(2), alpha.sin().powi(2));
    (0..n)
        .map(|i| {
            let t = gamma + 2.0 * PI * i as f64 / n as f64;
            2.0 / n as f64 * ((t / 2.0).cos().powi(2) * c2 + (t / 2.0).sin().powi(2) * s2)
        })
        .collect()
}
