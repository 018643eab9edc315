//! Shannon, Tsallis and Rényi entropies, mutual information, and the
//! entropic distances built from them.
//!
//! All logarithms are natural. Mutual information is always the
//! subtractive form `H(X) + H(Y) - H(X,Y)` evaluated with whichever entropy
//! is in force, so for Tsallis `q > 1` it is nonzero for independent
//! variables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::{JointDistribution, Party};

/// Probabilities below this are treated as exactly zero.
pub const PROB_FLOOR: f64 = 1e-15;
/// Tsallis with `|q - 1|` below this is evaluated as Shannon.
pub const SHANNON_DISPATCH: f64 = 1e-9;
const SUM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid entropy parameter: {0}")]
    InvalidParameter(String),
    #[error("distance {0:?} is not defined here")]
    UnsupportedDistance(DistanceKind),
    #[error("covariance distance needs a 2x2 table, got {rows}x{cols}")]
    NotBinary { rows: usize, cols: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "q", rename_all = "lowercase")]
pub enum EntropyKind {
    Shannon,
    Tsallis(f64),
    Renyi(f64),
}

impl EntropyKind {
    /// Tsallis entropy with `q >= 1`.
    pub fn tsallis(q: f64) -> Result<Self, EntropyError> {
        if !q.is_finite() || q < 1.0 {
            return Err(EntropyError::InvalidParameter(format!(
                "Tsallis q must be finite and >= 1, got {q}"
            )));
        }
        Ok(Self::Tsallis(q))
    }

    pub fn renyi(q: f64) -> Result<Self, EntropyError> {
        if !q.is_finite() || q <= 0.0 || q == 1.0 {
            return Err(EntropyError::InvalidParameter(format!(
                "Renyi q must be positive and != 1, got {q}"
            )));
        }
        Ok(Self::Renyi(q))
    }

    /// The `q` parameter, with Shannon reported as 1.
    pub fn q(&self) -> f64 {
        match *self {
            Self::Shannon => 1.0,
            Self::Tsallis(q) | Self::Renyi(q) => q,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Shannon => "shannon",
            Self::Tsallis(_) => "tsallis",
            Self::Renyi(_) => "renyi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistanceKind {
    /// H(X,Y) − I(X,Y)
    D1,
    /// 1 − I(X,Y)/H(X,Y)
    D1Norm,
    /// max{H(X),H(Y)} − I(X,Y)
    D2,
    /// 1 − I(X,Y)/max{H(X),H(Y)}
    D2Norm,
    /// 1 − ⟨XY⟩ for ±1 outcomes
    Covariance,
}

impl DistanceKind {
    pub const ENTROPIC: [DistanceKind; 4] = [Self::D1, Self::D1Norm, Self::D2, Self::D2Norm];

    /// Short CLI / CSV label.
    pub fn label(&self) -> &'static str {
        match self {
            Self::D1 => "d1",
            Self::D1Norm => "d1n",
            Self::D2 => "d2",
            Self::D2Norm => "d2n",
            Self::Covariance => "cov",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Some(match s {
            "d1" => Self::D1,
            "d1n" => Self::D1Norm,
            "d2" => Self::D2,
            "d2n" => Self::D2Norm,
            "cov" => Self::Covariance,
            _ => return None,
        })
    }
}

/// Checks nonnegativity and normalization.
pub fn validate_distribution(p: &[f64]) -> Result<(), EntropyError> {
    if p.is_empty() {
        return Err(EntropyError::InvalidDistribution("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(EntropyError::InvalidDistribution(format!("entry {x}")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > SUM_TOLERANCE {
        return Err(EntropyError::InvalidDistribution(format!("sums to {s}")));
    }
    Ok(())
}

/// Entropy of a probability vector (a joint table may be passed flattened).
pub fn entropy(p: &[f64], kind: EntropyKind) -> Result<f64, EntropyError> {
    validate_distribution(p)?;
    match kind {
        EntropyKind::Tsallis(q) if !(q.is_finite() && q >= 1.0) => {
            return Err(EntropyError::InvalidParameter(format!("Tsallis q = {q}")))
        }
        EntropyKind::Renyi(q) if !(q.is_finite() && q > 0.0 && q != 1.0) => {
            return Err(EntropyError::InvalidParameter(format!("Renyi q = {q}")))
        }
        _ => {}
    }
    Ok(entropy_unchecked(p, kind))
}

/// Entropy without input validation; used in the optimizer's inner loop.
#[inline]
pub fn entropy_unchecked(p: &[f64], kind: EntropyKind) -> f64 {
    match kind {
        EntropyKind::Shannon => shannon(p),
        EntropyKind::Tsallis(q) => {
            if (q - 1.0).abs() < SHANNON_DISPATCH {
                shannon(p)
            } else {
                tsallis(p, q)
            }
        }
        EntropyKind::Renyi(q) => renyi(p, q),
    }
}

fn shannon(p: &[f64]) -> f64 {
    let h: f64 = p
        .iter()
        .filter(|&&x| x > PROB_FLOOR)
        .map(|&x| -x * x.ln())
        .sum();
    h.max(0.0)
}

// (1 − Σ p^q)/(q − 1) written as −Σ p·expm1((q−1) ln p)/(q−1), which stays
// accurate as q → 1.
fn tsallis(p: &[f64], q: f64) -> f64 {
    let qm1 = q - 1.0;
    let s: f64 = p
        .iter()
        .filter(|&&x| x > PROB_FLOOR)
        .map(|&x| -x * (qm1 * x.ln()).exp_m1())
        .sum();
    (s / qm1).max(0.0)
}

fn renyi(p: &[f64], q: f64) -> f64 {
    let s: f64 = p
        .iter()
        .filter(|&&x| x > PROB_FLOOR)
        .map(|&x| x.powf(q))
        .sum();
    (s.ln() / (1.0 - q)).max(0.0)
}

/// Marginal and joint entropies of one two-variable table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyTerms {
    pub h_x: f64,
    pub h_y: f64,
    pub h_xy: f64,
}

impl EntropyTerms {
    pub fn of(joint: &JointDistribution, kind: EntropyKind) -> Self {
        Self {
            h_x: entropy_unchecked(&joint.marginal(Party::A), kind),
            h_y: entropy_unchecked(&joint.marginal(Party::B), kind),
            h_xy: entropy_unchecked(joint.probs(), kind),
        }
    }

    pub fn mutual_information(&self) -> f64 {
        self.h_x + self.h_y - self.h_xy
    }

    /// Entropic distance from precomputed terms. `Covariance` has no entropic
    /// form and yields `None`.
    #[inline]
    pub fn distance(&self, dkind: DistanceKind) -> Option<f64> {
        let i = self.mutual_information();
        let hmax = self.h_x.max(self.h_y);
        let d = match dkind {
            DistanceKind::D1 => self.h_xy - i,
            DistanceKind::D1Norm => normalized(self.h_xy - i, self.h_xy),
            DistanceKind::D2 => hmax - i,
            DistanceKind::D2Norm => normalized(hmax - i, hmax),
            DistanceKind::Covariance => return None,
        };
        Some(d)
    }
}

// 0/0 := 0: both variables deterministic, hence identical.
#[inline]
fn normalized(num: f64, den: f64) -> f64 {
    if den <= 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn mutual_information(joint: &JointDistribution, kind: EntropyKind) -> Result<f64, EntropyError> {
    entropy(joint.probs(), kind)?;
    Ok(EntropyTerms::of(joint, kind).mutual_information())
}

/// One of the four entropic distances between the row and column variables
/// of `joint`.
pub fn entropic_distance(
    joint: &JointDistribution,
    dkind: DistanceKind,
    ekind: EntropyKind,
) -> Result<f64, EntropyError> {
    if dkind == DistanceKind::Covariance {
        return Err(EntropyError::UnsupportedDistance(dkind));
    }
    entropy(joint.probs(), ekind)?;
    Ok(EntropyTerms::of(joint, ekind)
        .distance(dkind)
        .expect("entropic distance kind"))
}

/// `1 − ⟨XY⟩` with index 0 labelled +1 and index 1 labelled −1.
pub fn covariance_distance(joint: &JointDistribution) -> Result<f64, EntropyError> {
    if joint.rows() != 2 || joint.cols() != 2 {
        return Err(EntropyError::NotBinary {
            rows: joint.rows(),
            cols: joint.cols(),
        });
    }
    Ok(covariance_distance_unchecked(joint.probs()))
}

#[inline]
pub(crate) fn covariance_distance_unchecked(p: &[f64]) -> f64 {
    1.0 - (p[0] - p[1] - p[2] + p[3])
}
