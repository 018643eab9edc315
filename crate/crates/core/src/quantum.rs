//! The noisy two-qudit state and outcome statistics of local path-mode
//! measurements.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{reck_unitary, ComplexMatrix, LinalgError, PhaseSettings};

const SUM_TOLERANCE: f64 = 1e-10;
/// Diagonal entries of ρ′ more negative than this are reported as errors.
pub const NEGATIVE_PROB_LIMIT: f64 = -1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid state parameters: {0}")]
    InvalidParams(String),
    #[error("invalid joint distribution: {0}")]
    InvalidDistribution(String),
    #[error("numerical corruption: p({m},{n}) = {value:e}")]
    NegativeProbability { m: usize, n: usize, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisyStateParams {
    pub beta: f64,
    pub visibility: f64,
    pub dim: usize,
}

impl NoisyStateParams {
    pub fn new(beta: f64, visibility: f64, dim: usize) -> Result<Self, QuantumError> {
        let p = Self {
            beta,
            visibility,
            dim,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn qutrits(beta: f64, visibility: f64) -> Result<Self, QuantumError> {
        Self::new(beta, visibility, 3)
    }

    pub fn validate(&self) -> Result<(), QuantumError> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(QuantumError::InvalidParams(format!("beta = {} not in [0,1]", self.beta)));
        }
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(QuantumError::InvalidParams(format!(
                "visibility = {} not in [0,1]",
                self.visibility
            )));
        }
        if !(2..=3).contains(&self.dim) {
            return Err(QuantumError::InvalidParams(format!("dim = {} not in {{2,3}}", self.dim)));
        }
        Ok(())
    }

    pub fn with_visibility(&self, visibility: f64) -> Result<Self, QuantumError> {
        Self::new(self.beta, visibility, self.dim)
    }

    /// Normalized Schmidt coefficients of |ψ⟩_β: the first `d − 1` are equal
    /// and the last is scaled by β.
    pub fn schmidt_coefficients(&self) -> Vec<f64> {
        let d = self.dim;
        let mut c = vec![1.0; d];
        c[d - 1] = self.beta;
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        c.iter().map(|x| x / norm).collect()
    }

    /// |ψ⟩_β as a vector in the product basis, index `i·d + j` for |i, j⟩.
    pub fn pure_state(&self) -> Vec<Complex64> {
        let d = self.dim;
        let mut v = vec![Complex64::new(0.0, 0.0); d * d];
        for (k, c) in self.schmidt_coefficients().into_iter().enumerate() {
            v[k * d + k] = Complex64::new(c, 0.0);
        }
        v
    }
}

/// ρ = V |ψ⟩⟨ψ|_β + (1 − V)/d² · I.
pub fn make_state(params: &NoisyStateParams) -> Result<ComplexMatrix, QuantumError> {
    params.validate()?;
    let n = params.dim * params.dim;
    let pure = ComplexMatrix::projector(&params.pure_state()).scale(params.visibility);
    let noise = ComplexMatrix::identity(n).scale((1.0 - params.visibility) / n as f64);
    Ok(pure.add(&noise)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

/// Outcome table p(m, n); rows belong to party A, columns to party B.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
}

impl JointDistribution {
    pub fn new(rows: usize, cols: usize, p: Vec<f64>) -> Result<Self, QuantumError> {
        if rows == 0 || cols == 0 || p.len() != rows * cols {
            return Err(QuantumError::InvalidDistribution(format!(
                "{} entries for a {rows}x{cols} table",
                p.len()
            )));
        }
        if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(QuantumError::InvalidDistribution(format!("entry {x}")));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > SUM_TOLERANCE {
            return Err(QuantumError::InvalidDistribution(format!("sums to {s}")));
        }
        Ok(Self { rows, cols, p })
    }

    pub fn uniform(rows: usize, cols: usize) -> Self {
        let n = rows * cols;
        Self {
            rows,
            cols,
            p: vec![1.0 / n as f64; n],
        }
    }

    /// Clips tiny negatives and renormalizes raw diagonal weights.
    fn from_raw(rows: usize, cols: usize, mut p: Vec<f64>) -> Result<Self, QuantumError> {
        for (idx, x) in p.iter_mut().enumerate() {
            if !x.is_finite() || *x < NEGATIVE_PROB_LIMIT {
                return Err(QuantumError::NegativeProbability {
                    m: idx / cols,
                    n: idx % cols,
                    value: *x,
                });
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > SUM_TOLERANCE {
            return Err(QuantumError::InvalidDistribution(format!("trace {s} != 1")));
        }
        p.iter_mut().for_each(|x| *x /= s);
        Ok(Self { rows, cols, p })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major probabilities.
    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    /// 0-based outcome indices.
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.p[m * self.cols + n]
    }

    pub fn transpose(&self) -> Self {
        let mut p = vec![0.0; self.p.len()];
        for m in 0..self.rows {
            for n in 0..self.cols {
                p[n * self.rows + m] = self.get(m, n);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            p,
        }
    }

    /// Row sums for A, column sums for B.
    pub fn marginal(&self, party: Party) -> Vec<f64> {
        match party {
            Party::A => self.p.chunks(self.cols).map(|r| r.iter().sum()).collect(),
            Party::B => (0..self.cols)
                .map(|n| (0..self.rows).map(|m| self.get(m, n)).sum())
                .collect(),
        }
    }
}

pub fn marginal(joint: &JointDistribution, party: Party) -> Vec<f64> {
    joint.marginal(party)
}

/// p(m, n) = ⟨m, n| (U_A ⊗ U_B) ρ (U_A ⊗ U_B)† |m, n⟩ for a general density
/// operator.
pub fn joint_distribution(
    rho: &ComplexMatrix,
    settings_a: &PhaseSettings,
    settings_b: &PhaseSettings,
) -> Result<JointDistribution, QuantumError> {
    let (da, db) = (settings_a.dim(), settings_b.dim());
    if rho.dim() != da * db {
        return Err(LinalgError::DimensionMismatch {
            expected: da * db,
            actual: rho.dim(),
        }
        .into());
    }
    let ua = reck_unitary(settings_a);
    let ub = reck_unitary(settings_b);
    let n = da * db;
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut raw = Vec::with_capacity(n);
    for m in 0..da {
        for k in 0..db {
            // w = row (m, k) of U_A ⊗ U_B
            for i in 0..da {
                for j in 0..db {
                    w[i * db + j] = ua[(m, i)] * ub[(k, j)];
                }
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..n {
                let row = rho.row(r);
                let inner: Complex64 = row.iter().zip(&w).map(|(x, y)| x * y.conj()).sum();
                acc += w[r] * inner;
            }
            raw.push(acc.re);
        }
    }
    JointDistribution::from_raw(da, db, raw)
}

/// The visibility family ρ_β(V) kept in factored form: outcome tables are
/// V·|(U_A ⊗ U_B)ψ|² plus uniform noise, without building ρ.
#[derive(Debug, Clone)]
pub struct NoisyState {
    params: NoisyStateParams,
    schmidt: Vec<f64>,
}

impl NoisyState {
    pub fn new(params: NoisyStateParams) -> Result<Self, QuantumError> {
        params.validate()?;
        Ok(Self {
            schmidt: params.schmidt_coefficients(),
            params,
        })
    }

    pub fn params(&self) -> &NoisyStateParams {
        &self.params
    }

    pub fn schmidt(&self) -> &[f64] {
        &self.schmidt
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        make_state(&self.params).expect("validated params")
    }

    pub fn joint_distribution(
        &self,
        settings_a: &PhaseSettings,
        settings_b: &PhaseSettings,
    ) -> Result<JointDistribution, QuantumError> {
        let d = self.params.dim;
        for s in [settings_a, settings_b] {
            if s.dim() != d {
                return Err(LinalgError::DimensionMismatch {
                    expected: d,
                    actual: s.dim(),
                }
                .into());
            }
        }
        let ua = reck_unitary(settings_a);
        let ub = reck_unitary(settings_b);
        let v = self.params.visibility;
        let noise = (1.0 - v) / (d * d) as f64;
        let mut raw = Vec::with_capacity(d * d);
        for m in 0..d {
            for n in 0..d {
                let amp: Complex64 = (0..d).map(|k| ua[(m, k)] * ub[(n, k)] * self.schmidt[k]).sum();
                raw.push(v * amp.norm_sqr() + noise);
            }
        }
        JointDistribution::from_raw(d, d, raw)
    }
}
