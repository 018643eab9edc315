use serde::{Deserialize, Serialize};

use super::{minimize_violation_warm, OptimizerConfig, SearchError};
use crate::entropy::{DistanceKind, EntropyKind};
use crate::inequality::QuadrangleSettings;
use crate::quantum::NoisyStateParams;

/// Coarse scan points, highest first.
const GRID_POINTS: usize = 11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityProbe {
    pub visibility: f64,
    pub min_violation: f64,
    pub evals: usize,
}

impl VisibilityProbe {
    pub fn is_violated(&self) -> bool {
        self.min_violation < -crate::inequality::VIOLATION_EPS
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalVisibilityResult {
    /// Midpoint of the final bracket; `None` when V = 1 shows no violation.
    pub v_c: Option<f64>,
    pub q: f64,
    pub beta: f64,
    pub dkind: DistanceKind,
    pub ekind: EntropyKind,
    /// Width of the final bracket `[lower, upper]`.
    pub bracket_width: f64,
    pub violated_at_v1: bool,
    /// Highest visibility at which no violation was found.
    pub lower: Option<VisibilityProbe>,
    /// Lowest visibility at which a violation was found.
    pub upper: Option<VisibilityProbe>,
    pub grid: Vec<VisibilityProbe>,
    pub bisection: Vec<VisibilityProbe>,
    /// Settings certifying the violation at `upper`.
    pub best_settings: Option<QuadrangleSettings>,
    pub evals_used: usize,
}

impl CriticalVisibilityResult {
    /// Minimum violation found at V = 1.
    pub fn violation_at_v1(&self) -> f64 {
        self.grid[0].min_violation
    }
}

struct Prober<'a> {
    beta: f64,
    dim: usize,
    dkind: DistanceKind,
    ekind: EntropyKind,
    config: &'a OptimizerConfig,
    evals: usize,
}

impl Prober<'_> {
    fn probe(
        &mut self,
        v: f64,
        warm: Option<&QuadrangleSettings>,
    ) -> Result<(VisibilityProbe, QuadrangleSettings), SearchError> {
        let params = NoisyStateParams::new(self.beta, v, self.dim)?;
        let warm: Vec<QuadrangleSettings> = warm.into_iter().cloned().collect();
        let r = minimize_violation_warm(&params, self.dkind, self.ekind, self.config, &warm)?;
        self.evals += r.evals_used;
        Ok((
            VisibilityProbe {
                visibility: v,
                min_violation: r.best_violation,
                evals: r.evals_used,
            },
            r.best_settings,
        ))
    }
}

/// Smallest visibility at which the optimizer still finds a violation.
///
/// An 11-point scan from V = 1 down to 0 brackets the threshold and checks
/// that the violation sign is monotone in V; bisection then narrows the
/// bracket to `v_precision`. Every probe is warm-started from the settings
/// that violated at the current upper end.
pub fn critical_visibility(
    beta: f64,
    dkind: DistanceKind,
    ekind: EntropyKind,
    config: &OptimizerConfig,
    v_precision: f64,
) -> Result<CriticalVisibilityResult, SearchError> {
    critical_visibility_dim(beta, 3, dkind, ekind, config, v_precision)
}

pub(crate) fn critical_visibility_dim(
    beta: f64,
    dim: usize,
    dkind: DistanceKind,
    ekind: EntropyKind,
    config: &OptimizerConfig,
    v_precision: f64,
) -> Result<CriticalVisibilityResult, SearchError> {
    if !(v_precision > 0.0) {
        return Err(SearchError::InvalidConfig("v_precision must be positive".into()));
    }
    let mut prober = Prober {
        beta,
        dim,
        dkind,
        ekind,
        config,
        evals: 0,
    };

    let mut grid: Vec<VisibilityProbe> = Vec::with_capacity(GRID_POINTS);
    let mut grid_settings: Vec<QuadrangleSettings> = Vec::with_capacity(GRID_POINTS);
    let mut incumbent: Option<QuadrangleSettings> = None;
    for i in 0..GRID_POINTS {
        let v = 1.0 - i as f64 / (GRID_POINTS - 1) as f64;
        let (probe, settings) = prober.probe(v, incumbent.as_ref())?;
        if probe.is_violated() {
            incumbent = Some(settings.clone());
        }
        grid.push(probe);
        grid_settings.push(settings);
    }

    let mut result = CriticalVisibilityResult {
        v_c: None,
        q: ekind.q(),
        beta,
        dkind,
        ekind,
        bracket_width: 0.0,
        violated_at_v1: grid[0].is_violated(),
        lower: None,
        upper: None,
        grid,
        bisection: Vec::new(),
        best_settings: None,
        evals_used: 0,
    };
    if !result.violated_at_v1 {
        result.evals_used = prober.evals;
        return Ok(result);
    }

    // lowest violating grid point; every point above it must violate too
    let lowest = (0..GRID_POINTS)
        .rev()
        .find(|&i| result.grid[i].is_violated())
        .expect("V = 1 violates");
    let mut incumbent = grid_settings[lowest].clone();
    for i in 0..lowest {
        if result.grid[i].is_violated() {
            continue;
        }
        // the scan missed a violation above a violating point: retry from
        // the lower point's settings before declaring non-monotonicity
        let (probe, settings) = prober.probe(result.grid[i].visibility, Some(&incumbent))?;
        if !probe.is_violated() {
            return Err(SearchError::NonMonotone(format!(
                "violation {:.3e} at V = {:.2} but {:.3e} at V = {:.2}",
                result.grid[lowest].min_violation,
                result.grid[lowest].visibility,
                probe.min_violation,
                probe.visibility
            )));
        }
        result.grid[i] = probe;
        grid_settings[i] = settings;
    }

    let mut upper = result.grid[lowest].clone();
    if lowest == GRID_POINTS - 1 {
        // violated even at V = 0, which no state admits
        return Err(SearchError::NonMonotone("violation reported at V = 0".into()));
    }
    let mut lower = result.grid[lowest + 1].clone();
    while upper.visibility - lower.visibility > v_precision {
        let mid = 0.5 * (upper.visibility + lower.visibility);
        let (probe, settings) = prober.probe(mid, Some(&incumbent))?;
        result.bisection.push(probe.clone());
        if probe.is_violated() {
            upper = probe;
            incumbent = settings;
        } else {
            lower = probe;
        }
    }

    result.v_c = Some(0.5 * (upper.visibility + lower.visibility));
    result.bracket_width = upper.visibility - lower.visibility;
    result.upper = Some(upper);
    result.lower = Some(lower);
    result.best_settings = Some(incumbent);
    result.evals_used = prober.evals;
    Ok(result)
}
