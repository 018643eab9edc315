//! The quadrangle Bell inequality d(A,B′) ≤ d(A,B) + d(B,A′) + d(A′,B′).
//!
//! A and A′ are Alice's settings, B and B′ are Bob's, so every distance is
//! between jointly measurable cross-party observables. The reported
//! violation is R − L; a negative value means the inequality is broken.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::{covariance_distance, entropic_distance, DistanceKind, EntropyError, EntropyKind};
use crate::linalg::{ComplexMatrix, PhaseSettings};
use crate::quantum::{joint_distribution, JointDistribution, QuantumError};

/// `min(R − L) < -VIOLATION_EPS` counts as an observed violation.
pub const VIOLATION_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InequalityError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error("settings have mixed local dimensions")]
    MixedDimensions,
    #[error("covariance distance needs qubits, got local dimension {0}")]
    CovarianceNeedsQubits(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadrangleSettings {
    pub a: PhaseSettings,
    pub a_prime: PhaseSettings,
    pub b: PhaseSettings,
    pub b_prime: PhaseSettings,
}

impl QuadrangleSettings {
    pub fn new(
        a: PhaseSettings,
        a_prime: PhaseSettings,
        b: PhaseSettings,
        b_prime: PhaseSettings,
    ) -> Result<Self, InequalityError> {
        let s = Self {
            a,
            a_prime,
            b,
            b_prime,
        };
        s.dim()?;
        Ok(s)
    }

    /// All four settings equal to `s`.
    pub fn uniform(s: PhaseSettings) -> Self {
        Self {
            a: s.clone(),
            a_prime: s.clone(),
            b: s.clone(),
            b_prime: s,
        }
    }

    /// Shared local dimension.
    pub fn dim(&self) -> Result<usize, InequalityError> {
        let d = self.a.dim();
        if [&self.a_prime, &self.b, &self.b_prime].iter().any(|s| s.dim() != d) {
            return Err(InequalityError::MixedDimensions);
        }
        Ok(d)
    }

    /// Settings in order A, A′, B, B′.
    pub fn as_array(&self) -> [&PhaseSettings; 4] {
        [&self.a, &self.a_prime, &self.b, &self.b_prime]
    }

    /// Swaps A ↔ A′ together with B ↔ B′.
    pub fn primed_swap(&self) -> Self {
        Self {
            a: self.a_prime.clone(),
            a_prime: self.a.clone(),
            b: self.b_prime.clone(),
            b_prime: self.b.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadrangleReport {
    /// L = d(A, B′)
    pub lhs: f64,
    /// R = d(A, B) + d(B, A′) + d(A′, B′)
    pub rhs: f64,
    /// R − L
    pub violation: f64,
    pub d_a_b: f64,
    pub d_b_aprime: f64,
    pub d_aprime_bprime: f64,
    pub d_a_bprime: f64,
}

impl QuadrangleReport {
    pub fn from_distances(d_a_b: f64, d_b_aprime: f64, d_aprime_bprime: f64, d_a_bprime: f64) -> Self {
        let rhs = d_a_b + d_b_aprime + d_aprime_bprime;
        let lhs = d_a_bprime;
        Self {
            lhs,
            rhs,
            violation: rhs - lhs,
            d_a_b,
            d_b_aprime,
            d_aprime_bprime,
            d_a_bprime,
        }
    }

    pub fn distances(&self) -> [f64; 4] {
        [self.d_a_b, self.d_b_aprime, self.d_aprime_bprime, self.d_a_bprime]
    }

    pub fn is_violated(&self) -> bool {
        self.violation < -VIOLATION_EPS
    }
}

/// The four cross-party outcome tables, Alice always on rows:
/// (A,B), (A′,B), (A′,B′), (A,B′).
pub fn quadrangle_joints(
    rho: &ComplexMatrix,
    settings: &QuadrangleSettings,
) -> Result<[JointDistribution; 4], InequalityError> {
    settings.dim()?;
    let s = settings;
    Ok([
        joint_distribution(rho, &s.a, &s.b)?,
        joint_distribution(rho, &s.a_prime, &s.b)?,
        joint_distribution(rho, &s.a_prime, &s.b_prime)?,
        joint_distribution(rho, &s.a, &s.b_prime)?,
    ])
}

pub fn evaluate_quadrangle(
    rho: &ComplexMatrix,
    settings: &QuadrangleSettings,
    dkind: DistanceKind,
    ekind: EntropyKind,
) -> Result<QuadrangleReport, InequalityError> {
    let d = settings.dim()?;
    if dkind == DistanceKind::Covariance && d != 2 {
        return Err(InequalityError::CovarianceNeedsQubits(d));
    }
    let joints = quadrangle_joints(rho, settings)?;
    let mut ds = [0.0; 4];
    for (out, j) in ds.iter_mut().zip(&joints) {
        *out = match dkind {
            DistanceKind::Covariance => covariance_distance(j)?,
            _ => entropic_distance(j, dkind, ekind)?,
        };
    }
    Ok(QuadrangleReport::from_distances(ds[0], ds[1], ds[2], ds[3]))
}

/// Quadrangle inequality with the covariance distance; on ±1 outcomes this
/// is CHSH, with violation = 2 − S.
pub fn evaluate_chsh_covariance(
    rho: &ComplexMatrix,
    settings: &QuadrangleSettings,
) -> Result<QuadrangleReport, InequalityError> {
    evaluate_quadrangle(rho, settings, DistanceKind::Covariance, EntropyKind::Shannon)
}
