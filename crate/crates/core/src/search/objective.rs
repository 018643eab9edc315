//! Allocation-free violation objective over a flat angle vector.
//!
//! Layout: four blocks in order A, A′, B, B′, each holding `(φ, ω)` per
//! Reck pair. α phases are fixed at zero; they do not affect outcome
//! probabilities.

use num_complex::Complex64;

use crate::entropy::{covariance_distance_unchecked, entropy_unchecked, DistanceKind, EntropyKind};
use crate::inequality::{InequalityError, QuadrangleSettings};
use crate::linalg::{reck_pairs, PhaseSettings};
use crate::quantum::NoisyState;

pub(crate) const MAX_DIM: usize = 3;
type Mat = [[Complex64; MAX_DIM]; MAX_DIM];

#[derive(Debug, Clone)]
pub struct ViolationObjective {
    dim: usize,
    pairs: Vec<(usize, usize)>,
    schmidt: [f64; MAX_DIM],
    visibility: f64,
    dkind: DistanceKind,
    ekind: EntropyKind,
}

impl ViolationObjective {
    pub fn new(state: &NoisyState, dkind: DistanceKind, ekind: EntropyKind) -> Result<Self, InequalityError> {
        let dim = state.params().dim;
        assert!(dim <= MAX_DIM);
        if dkind == DistanceKind::Covariance && dim != 2 {
            return Err(InequalityError::CovarianceNeedsQubits(dim));
        }
        let mut schmidt = [0.0; MAX_DIM];
        schmidt[..dim].copy_from_slice(state.schmidt());
        Ok(Self {
            dim,
            pairs: reck_pairs(dim),
            schmidt,
            visibility: state.params().visibility,
            dkind,
            ekind,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of angles per setting.
    pub fn setting_len(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Total search dimension (four settings).
    pub fn len(&self) -> usize {
        4 * self.setting_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn settings(&self, x: &[f64]) -> QuadrangleSettings {
        let k = self.setting_len();
        let mk = |i: usize| PhaseSettings::from_flat(self.dim, &x[i * k..(i + 1) * k]).expect("finite angles");
        QuadrangleSettings {
            a: mk(0),
            a_prime: mk(1),
            b: mk(2),
            b_prime: mk(3),
        }
    }

    pub fn flatten(settings: &QuadrangleSettings) -> Vec<f64> {
        settings.as_array().iter().flat_map(|s| s.flat_angles()).collect()
    }

    /// Product T_1 · T_2 · … in Reck order. The local unitary is its adjoint.
    fn reck_product(&self, angles: &[f64]) -> Mat {
        let zero = Complex64::new(0.0, 0.0);
        let mut m = [[zero; MAX_DIM]; MAX_DIM];
        for (i, row) in m.iter_mut().enumerate().take(self.dim) {
            row[i] = Complex64::new(1.0, 0.0);
        }
        for (k, &(p, q)) in self.pairs.iter().enumerate() {
            let (s, c) = angles[2 * k + 1].sin_cos();
            let e = Complex64::from_polar(1.0, angles[2 * k]);
            let (p0, q0) = (p - 1, q - 1);
            for row in m.iter_mut().take(self.dim) {
                let (mq, mp) = (row[q0], row[p0]);
                row[q0] = mq * (-s) + mp * e * c;
                row[p0] = mq * c + mp * e * s;
            }
        }
        m
    }

    /// p(m, n) with A's outcome on rows.
    fn table(&self, pa: &Mat, pb: &Mat, out: &mut [f64; MAX_DIM * MAX_DIM]) {
        let d = self.dim;
        let noise = (1.0 - self.visibility) / (d * d) as f64;
        // U = P†, so ⟨m,n|U_A⊗U_B|ψ⟩ = conj(Σ_k c_k P_A[k][m] P_B[k][n])
        for m in 0..d {
            for n in 0..d {
                let mut amp = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    amp += pa[k][m] * pb[k][n] * self.schmidt[k];
                }
                out[m * d + n] = self.visibility * amp.norm_sqr() + noise;
            }
        }
    }

    fn distance(&self, pa: &Mat, pb: &Mat) -> f64 {
        let d = self.dim;
        let mut p = [0.0; MAX_DIM * MAX_DIM];
        self.table(pa, pb, &mut p);
        let p = &p[..d * d];
        if self.dkind == DistanceKind::Covariance {
            return covariance_distance_unchecked(p);
        }
        let mut rows = [0.0; MAX_DIM];
        let mut cols = [0.0; MAX_DIM];
        for m in 0..d {
            for n in 0..d {
                rows[m] += p[m * d + n];
                cols[n] += p[m * d + n];
            }
        }
        let h_x = entropy_unchecked(&rows[..d], self.ekind);
        let h_y = entropy_unchecked(&cols[..d], self.ekind);
        let h_xy = entropy_unchecked(p, self.ekind);
        crate::entropy::EntropyTerms { h_x, h_y, h_xy }
            .distance(self.dkind)
            .expect("entropic kind")
    }

    /// R − L for the flat angle vector `x`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let k = self.setting_len();
        let a = self.reck_product(&x[..k]);
        let a_prime = self.reck_product(&x[k..2 * k]);
        let b = self.reck_product(&x[2 * k..3 * k]);
        let b_prime = self.reck_product(&x[3 * k..4 * k]);
        let d_ab = self.distance(&a, &b);
        let d_bap = self.distance(&a_prime, &b);
        let d_apbp = self.distance(&a_prime, &b_prime);
        let d_abp = self.distance(&a, &b_prime);
        d_ab + d_bap + d_apbp - d_abp
    }
}
