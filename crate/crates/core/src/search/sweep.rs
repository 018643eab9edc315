use serde::{Deserialize, Serialize};

use super::visibility::critical_visibility_dim;
use super::{minimize_violation, OptimizerConfig, SearchError};
use crate::entropy::{DistanceKind, EntropyKind};
use crate::quantum::NoisyStateParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SweepMode {
    /// Minimum violation at a fixed visibility.
    FixedVisibility(f64),
    /// Critical visibility, bisected to the given precision.
    CriticalVisibility(f64),
}

/// One line of a sweep table; `None` fields are emitted empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q: f64,
    pub beta: f64,
    pub visibility: Option<f64>,
    pub metric: DistanceKind,
    pub entropy: EntropyKind,
    /// At `visibility`, or at V = 1 in critical-visibility mode.
    pub min_violation: Option<f64>,
    pub v_c: Option<f64>,
    pub restarts: usize,
    pub seed: u64,
    pub evals: usize,
}

fn row(
    beta: f64,
    dkind: DistanceKind,
    ekind: EntropyKind,
    mode: SweepMode,
    config: &OptimizerConfig,
) -> Result<SweepRow, SearchError> {
    let mut r = SweepRow {
        q: ekind.q(),
        beta,
        visibility: None,
        metric: dkind,
        entropy: ekind,
        min_violation: None,
        v_c: None,
        restarts: config.restarts,
        seed: config.seed,
        evals: 0,
    };
    match mode {
        SweepMode::FixedVisibility(v) => {
            let params = NoisyStateParams::qutrits(beta, v)?;
            let res = minimize_violation(&params, dkind, ekind, config)?;
            r.visibility = Some(v);
            r.min_violation = Some(res.best_violation);
            r.evals = res.evals_used;
        }
        SweepMode::CriticalVisibility(precision) => {
            let res = critical_visibility_dim(beta, 3, dkind, ekind, config, precision)?;
            r.min_violation = Some(res.violation_at_v1());
            r.v_c = res.v_c;
            r.evals = res.evals_used;
        }
    }
    Ok(r)
}

/// One row per Tsallis `q`. The row at `q = 1` is the Shannon computation.
pub fn sweep_q(
    beta: f64,
    dkind: DistanceKind,
    q_grid: &[f64],
    mode: SweepMode,
    config: &OptimizerConfig,
) -> Result<Vec<SweepRow>, SearchError> {
    if q_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(SearchError::InvalidConfig("q grid must be sorted".into()));
    }
    q_grid
        .iter()
        .map(|&q| {
            let ekind = EntropyKind::tsallis(q)?;
            row(beta, dkind, ekind, mode, config)
        })
        .collect()
}

pub fn sweep_beta(
    beta_grid: &[f64],
    dkind: DistanceKind,
    ekind: EntropyKind,
    mode: SweepMode,
    config: &OptimizerConfig,
) -> Result<Vec<SweepRow>, SearchError> {
    beta_grid
        .iter()
        .map(|&beta| row(beta, dkind, ekind, mode, config))
        .collect()
}

/// `start, start + step, …` up to `end` inclusive, on exact decimal steps.
pub fn grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && end >= start);
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}
