//! Small dense complex matrices and the Reck beam-splitter construction of
//! local unitaries.
//!
//! Every matrix in this crate is at most 9×9, so storage is a flat row-major
//! `Vec<Complex64>` and all products are naive triple loops.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid mode pair (p={p}, q={q}) for dimension {dim}: need 1 <= q < p <= dim")]
    InvalidModes { dim: usize, p: usize, q: usize },
    #[error("matrix dimension must be at least {min}, got {dim}")]
    BadDimension { dim: usize, min: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("expected {expected} Mach-Zehnder angle pairs, got {actual}")]
    WrongParamCount { expected: usize, actual: usize },
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-square lengths
    /// and non-finite values.
    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if dim == 0 {
            return Err(LinalgError::BadDimension { dim, min: 1 });
        }
        if data.len() != dim * dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite("matrix entries"));
        }
        Ok(Self { dim, data })
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Outer product |v⟩⟨v|.
    pub fn projector(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        check_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// ‖U U† − I‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        let uu = self.matmul(&self.adjoint()).expect("square");
        uu.max_abs_diff(&Self::identity(self.dim))
    }

    /// ‖A − A†‖_max.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Eigenvalues of a Hermitian matrix in ascending order. Only the
    /// Hermitian part is looked at.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

fn check_dim(expected: usize, actual: usize) -> Result<(), LinalgError> {
    if expected == actual {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, actual })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Folds an angle into `[0, 2π)`.
pub fn fold_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// One two-mode interferometer block acting on modes `p > q` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MzParam {
    pub p: usize,
    pub q: usize,
    pub phi: f64,
    pub omega: f64,
}

/// Mode pairs in Reck product order: T_{d,d-1}, T_{d,d-2}, ..., T_{d,1},
/// T_{d-1,d-2}, ..., T_{2,1}.
pub fn reck_pairs(dim: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(dim * (dim - 1) / 2);
    for p in (2..=dim).rev() {
        for q in (1..p).rev() {
            pairs.push((p, q));
        }
    }
    pairs
}

/// Angles defining one party's measurement setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSettings {
    dim: usize,
    mz_params: Vec<MzParam>,
    alphas: Vec<f64>,
}

impl PhaseSettings {
    /// `angles` holds one `(φ, ω)` pair per entry of [`reck_pairs`]. All
    /// angles are folded into `[0, 2π)`.
    pub fn new(dim: usize, angles: &[(f64, f64)], alphas: &[f64]) -> Result<Self, LinalgError> {
        if dim < 2 {
            return Err(LinalgError::BadDimension { dim, min: 2 });
        }
        let pairs = reck_pairs(dim);
        if angles.len() != pairs.len() {
            return Err(LinalgError::WrongParamCount {
                expected: pairs.len(),
                actual: angles.len(),
            });
        }
        check_dim(dim, alphas.len())?;
        if angles.iter().any(|(a, b)| !a.is_finite() || !b.is_finite())
            || alphas.iter().any(|a| !a.is_finite())
        {
            return Err(LinalgError::NonFinite("phase settings"));
        }
        let mz_params = pairs
            .into_iter()
            .zip(angles)
            .map(|((p, q), &(phi, omega))| MzParam {
                p,
                q,
                phi: fold_angle(phi),
                omega: fold_angle(omega),
            })
            .collect();
        Ok(Self {
            dim,
            mz_params,
            alphas: alphas.iter().copied().map(fold_angle).collect(),
        })
    }

    /// Settings with every α fixed to zero, from a flat `[φ₀, ω₀, φ₁, ω₁, …]`.
    pub fn from_flat(dim: usize, flat: &[f64]) -> Result<Self, LinalgError> {
        if flat.len() % 2 != 0 {
            return Err(LinalgError::WrongParamCount {
                expected: dim * (dim.saturating_sub(1)) / 2,
                actual: flat.len() / 2,
            });
        }
        let angles: Vec<(f64, f64)> = flat.chunks(2).map(|c| (c[0], c[1])).collect();
        Self::new(dim, &angles, &vec![0.0; dim])
    }

    /// All ω = π/2, φ = α = 0: every block is diagonal, so U is diagonal.
    pub fn diagonal(dim: usize) -> Self {
        let n = dim * (dim - 1) / 2;
        Self::new(dim, &vec![(0.0, std::f64::consts::FRAC_PI_2); n], &vec![0.0; dim])
            .expect("valid diagonal settings")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mz_params(&self) -> &[MzParam] {
        &self.mz_params
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn with_alphas(&self, alphas: &[f64]) -> Result<Self, LinalgError> {
        let angles: Vec<_> = self.mz_params.iter().map(|m| (m.phi, m.omega)).collect();
        Self::new(self.dim, &angles, alphas)
    }

    /// `[φ₀, ω₀, φ₁, ω₁, …]` in Reck order.
    pub fn flat_angles(&self) -> Vec<f64> {
        self.mz_params.iter().flat_map(|m| [m.phi, m.omega]).collect()
    }
}

/// The d×d block T_pq (1-based modes, `p > q`):
/// t_pp = e^{iφ} sin ω, t_qq = −sin ω, t_pq = e^{iφ} cos ω, t_qp = cos ω.
pub fn mach_zehnder_matrix(
    d: usize,
    p: usize,
    q: usize,
    phi: f64,
    omega: f64,
) -> Result<ComplexMatrix, LinalgError> {
    if q < 1 || q >= p || p > d {
        return Err(LinalgError::InvalidModes { dim: d, p, q });
    }
    if !phi.is_finite() || !omega.is_finite() {
        return Err(LinalgError::NonFinite("interferometer angles"));
    }
    let (s, c) = omega.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let mut t = ComplexMatrix::identity(d);
    let (p0, q0) = (p - 1, q - 1);
    t[(p0, p0)] = e * s;
    t[(q0, q0)] = Complex64::new(-s, 0.0);
    t[(p0, q0)] = e * c;
    t[(q0, p0)] = Complex64::new(c, 0.0);
    Ok(t)
}

/// U = (T_{d,d-1} ··· T_{2,1} · D)^{-1}, D = diag(e^{iα}). The inverse is
/// taken as the conjugate transpose.
pub fn reck_unitary(settings: &PhaseSettings) -> ComplexMatrix {
    let d = settings.dim;
    let mut prod = ComplexMatrix::identity(d);
    for m in &settings.mz_params {
        let t = mach_zehnder_matrix(d, m.p, m.q, m.phi, m.omega).expect("validated settings");
        prod = &prod * &t;
    }
    let phases: Vec<Complex64> = settings
        .alphas
        .iter()
        .map(|&a| Complex64::from_polar(1.0, a))
        .collect();
    prod = &prod * &ComplexMatrix::diagonal(&phases);
    prod.adjoint()
}

/// Kronecker product A ⊗ B.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// ρ′ = (U_A ⊗ U_B) ρ (U_A ⊗ U_B)†.
pub fn conjugate_by_local_unitaries(
    rho: &ComplexMatrix,
    ua: &ComplexMatrix,
    ub: &ComplexMatrix,
) -> Result<ComplexMatrix, LinalgError> {
    check_dim(ua.dim * ub.dim, rho.dim)?;
    let w = tensor_product(ua, ub);
    Ok(&(&w * rho) * &w.adjoint())
}
