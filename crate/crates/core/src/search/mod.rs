//! Seeded multi-start minimization of the quadrangle violation, critical
//! visibility, parameter sweeps, and triangle-inequality searches.
//!
//! Every restart draws its starting point from a ChaCha stream selected by
//! `(seed, restart index)`, and restarts are reduced by `(value, index)`, so
//! results do not depend on the number of worker threads.

mod nelder_mead;
mod objective;
mod sweep;
mod triangle;
mod visibility;

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::{DistanceKind, EntropyError, EntropyKind};
use crate::inequality::{evaluate_quadrangle, InequalityError, QuadrangleReport, QuadrangleSettings};
use crate::quantum::{NoisyState, NoisyStateParams, QuantumError};

pub use nelder_mead::{minimize as nelder_mead, NelderMeadOptions, NelderMeadOutcome};
pub use objective::ViolationObjective;
pub use sweep::{grid, sweep_beta, sweep_q, SweepMode, SweepRow};
pub use triangle::{
    metric_audit, random_tripartite, renyi_triangle_counterexample, triangle_counterexample, AuditRow,
    TriangleCounterexample, TripartiteDistribution,
};
pub use visibility::{critical_visibility, CriticalVisibilityResult, VisibilityProbe};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Inequality(#[from] InequalityError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("minimum violation is not monotone in V: {0}")]
    NonMonotone(String),
}

impl SearchError {
    /// True when the failure traces back to a corrupted probability table.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Self::Quantum(QuantumError::NegativeProbability { .. })
                | Self::Inequality(InequalityError::Quantum(QuantumError::NegativeProbability { .. }))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_evals_per_restart: usize,
    pub objective_tolerance: f64,
    pub seed: u64,
    pub parallel_workers: usize,
    /// Edge length (radians) of the initial simplex for fresh restarts.
    pub initial_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            max_evals_per_restart: 5000,
            objective_tolerance: 1e-8,
            seed: 0,
            parallel_workers: 1,
            initial_step: 0.6,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.restarts < 1 {
            return Err(SearchError::InvalidConfig("restarts must be >= 1".into()));
        }
        if self.max_evals_per_restart < 1 {
            return Err(SearchError::InvalidConfig("max_evals_per_restart must be >= 1".into()));
        }
        if !(self.objective_tolerance > 0.0) || !(self.initial_step > 0.0) {
            return Err(SearchError::InvalidConfig("tolerance and step must be positive".into()));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn with_restarts(&self, restarts: usize) -> Self {
        Self {
            restarts,
            ..self.clone()
        }
    }

    fn nelder_mead(&self, step: f64) -> NelderMeadOptions {
        NelderMeadOptions {
            initial_step: step,
            max_evals: self.max_evals_per_restart,
            ftol: self.objective_tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_violation: f64,
    pub best_settings: QuadrangleSettings,
    pub report: QuadrangleReport,
    pub evals_used: usize,
    /// Index into the combined run list: warm starts first, then fresh
    /// restarts.
    pub restart_index_of_best: usize,
    /// Local minimum reached by each run, in run order.
    pub run_minima: Vec<f64>,
    pub seed: u64,
}

impl OptimizationResult {
    pub fn is_violated(&self) -> bool {
        self.report.is_violated()
    }

    /// Running best over runs; non-increasing by construction.
    pub fn running_best(&self) -> Vec<f64> {
        self.run_minima
            .iter()
            .scan(f64::INFINITY, |best, &v| {
                *best = best.min(v);
                Some(*best)
            })
            .collect()
    }
}

/// Uniform start point in `[0, 2π)^len` for restart `index`.
pub fn restart_start(seed: u64, index: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..len).map(|_| rng.gen_range(0.0..TAU)).collect()
}

/// Initial simplex edge for runs that start from a known good point.
const WARM_STEP: f64 = 0.05;

pub fn minimize_violation(
    params: &NoisyStateParams,
    dkind: DistanceKind,
    ekind: EntropyKind,
    config: &OptimizerConfig,
) -> Result<OptimizationResult, SearchError> {
    minimize_violation_warm(params, dkind, ekind, config, &[])
}

/// As [`minimize_violation`], with extra runs seeded from `warm` settings
/// before the fresh restarts.
pub fn minimize_violation_warm(
    params: &NoisyStateParams,
    dkind: DistanceKind,
    ekind: EntropyKind,
    config: &OptimizerConfig,
    warm: &[QuadrangleSettings],
) -> Result<OptimizationResult, SearchError> {
    config.validate()?;
    if let EntropyKind::Tsallis(q) = ekind {
        EntropyKind::tsallis(q)?;
    }
    let state = NoisyState::new(*params)?;
    let objective = ViolationObjective::new(&state, dkind, ekind)?;
    let n = objective.len();
    for w in warm {
        if w.dim()? != params.dim {
            return Err(InequalityError::MixedDimensions.into());
        }
    }

    let warm_starts: Vec<Vec<f64>> = warm.iter().map(ViolationObjective::flatten).collect();
    let total = warm_starts.len() + config.restarts;
    let run = |i: usize| -> NelderMeadOutcome {
        let (x0, step) = match warm_starts.get(i) {
            Some(x) => (x.clone(), WARM_STEP),
            None => (
                restart_start(config.seed, (i - warm_starts.len()) as u64, n),
                config.initial_step,
            ),
        };
        nelder_mead(|x| objective.violation(x), &x0, config.nelder_mead(step))
    };

    let outcomes: Vec<NelderMeadOutcome> = if config.parallel_workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallel_workers)
            .build()
            .map_err(|e| SearchError::InvalidConfig(e.to_string()))?;
        pool.install(|| (0..total).into_par_iter().map(run).collect())
    } else {
        (0..total).map(run).collect()
    };

    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.fx < outcomes[best].fx {
            best = i;
        }
    }
    let best_settings = objective.settings(&outcomes[best].x);
    let report = evaluate_quadrangle(&state.density_matrix(), &best_settings, dkind, ekind)?;
    Ok(OptimizationResult {
        best_violation: report.violation,
        best_settings,
        report,
        evals_used: outcomes.iter().map(|o| o.evals).sum(),
        restart_index_of_best: best,
        run_minima: outcomes.iter().map(|o| o.fx).collect(),
        seed: config.seed,
    })
}

/// Maximally entangled qubit pair with the covariance distance; the
/// optimum is 2 − 2√2.
pub fn chsh_sanity(config: &OptimizerConfig) -> Result<OptimizationResult, SearchError> {
    let params = NoisyStateParams::new(1.0, 1.0, 2)?;
    minimize_violation(&params, DistanceKind::Covariance, EntropyKind::Shannon, config)
}
