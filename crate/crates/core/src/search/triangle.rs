//! Random tripartite distributions and triangle-inequality checks for the
//! entropic distances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{entropic_distance, DistanceKind, EntropyError, EntropyKind};
use crate::quantum::JointDistribution;

/// Triangle slack below this counts as a violation.
pub const TRIANGLE_EPS: f64 = 1e-9;

/// p(x, y, z) on 3×3×3, index `9x + 3y + z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripartiteDistribution {
    pub p: Vec<f64>,
}

impl TripartiteDistribution {
    pub const SIDE: usize = 3;

    fn at(&self, x: usize, y: usize, z: usize) -> f64 {
        self.p[9 * x + 3 * y + z]
    }

    fn pair(&self, f: impl Fn(usize, usize, usize) -> (usize, usize)) -> JointDistribution {
        let mut t = vec![0.0; 9];
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    let (r, c) = f(x, y, z);
                    t[3 * r + c] += self.at(x, y, z);
                }
            }
        }
        JointDistribution::new(3, 3, t).expect("marginal of a normalized table")
    }

    pub fn xy(&self) -> JointDistribution {
        self.pair(|x, y, _| (x, y))
    }

    pub fn yz(&self) -> JointDistribution {
        self.pair(|_, y, z| (y, z))
    }

    pub fn xz(&self) -> JointDistribution {
        self.pair(|x, _, z| (x, z))
    }
}

/// Random point of the 27-simplex. Weights are powers of exponential
/// variates; the power is drawn per sample, so the draws range from
/// near-uniform to nearly deterministic tables.
pub fn random_tripartite<R: Rng>(rng: &mut R) -> TripartiteDistribution {
    let sharpness: f64 = rng.gen_range(1.0..6.0);
    let mut w: Vec<f64> = (0..27)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            (-u.ln()).powf(sharpness)
        })
        .collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    TripartiteDistribution { p: w }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleCounterexample {
    pub trial: usize,
    pub distribution: TripartiteDistribution,
    pub d_xy: f64,
    pub d_yz: f64,
    pub d_xz: f64,
    /// d(X,Z) − d(X,Y) − d(Y,Z), positive.
    pub slack: f64,
}

/// First sampled distribution with d(X,Z) > d(X,Y) + d(Y,Z) + 1e−9.
pub fn triangle_counterexample(
    dkind: DistanceKind,
    ekind: EntropyKind,
    trials: usize,
    seed: u64,
) -> Result<Option<TriangleCounterexample>, EntropyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let t = random_tripartite(&mut rng);
        let d_xy = entropic_distance(&t.xy(), dkind, ekind)?;
        let d_yz = entropic_distance(&t.yz(), dkind, ekind)?;
        let d_xz = entropic_distance(&t.xz(), dkind, ekind)?;
        let slack = d_xz - d_xy - d_yz;
        if slack > TRIANGLE_EPS {
            return Ok(Some(TriangleCounterexample {
                trial,
                distribution: t,
                d_xy,
                d_yz,
                d_xz,
                slack,
            }));
        }
    }
    Ok(None)
}

/// Counterexample search for the Rényi-based d₁.
pub fn renyi_triangle_counterexample(
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<Option<TriangleCounterexample>, EntropyError> {
    triangle_counterexample(DistanceKind::D1, EntropyKind::renyi(q)?, trials, seed)
}

/// Worst-case metric-axiom figures for one (distance, entropy) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub dkind: DistanceKind,
    pub ekind: EntropyKind,
    pub samples: usize,
    /// min over samples and orientations of d(X,Y) + d(Y,Z) − d(X,Z)
    pub worst_triangle_slack: f64,
    /// smallest distance seen
    pub min_distance: f64,
    /// largest |d(X,Y) − d(Y,X)|
    pub max_asymmetry: f64,
    /// largest |d(X,X)|
    pub max_self_distance: f64,
}

fn diagonal_joint(marginal: &[f64]) -> JointDistribution {
    let n = marginal.len();
    let mut t = vec![0.0; n * n];
    for (i, &p) in marginal.iter().enumerate() {
        t[i * n + i] = p;
    }
    JointDistribution::new(n, n, t).expect("normalized marginal")
}

/// Samples `samples` tripartite distributions once and checks every
/// combination of the four entropic distances with Shannon and with each
/// Tsallis `q` in `qs`.
pub fn metric_audit(samples: usize, seed: u64, qs: &[f64]) -> Result<Vec<AuditRow>, EntropyError> {
    let mut kinds = vec![EntropyKind::Shannon];
    for &q in qs {
        kinds.push(EntropyKind::tsallis(q)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<_> = (0..samples)
        .map(|_| {
            let t = random_tripartite(&mut rng);
            (t.xy(), t.yz(), t.xz())
        })
        .collect();

    let mut rows = Vec::new();
    for dkind in DistanceKind::ENTROPIC {
        for &ekind in &kinds {
            let mut row = AuditRow {
                dkind,
                ekind,
                samples,
                worst_triangle_slack: f64::INFINITY,
                min_distance: f64::INFINITY,
                max_asymmetry: 0.0,
                max_self_distance: 0.0,
            };
            for (xy, yz, xz) in &draws {
                let a = entropic_distance(xy, dkind, ekind)?;
                let b = entropic_distance(yz, dkind, ekind)?;
                let c = entropic_distance(xz, dkind, ekind)?;
                let slack = (a + b - c).min(a + c - b).min(b + c - a);
                row.worst_triangle_slack = row.worst_triangle_slack.min(slack);
                row.min_distance = row.min_distance.min(a).min(b).min(c);
                let a_t = entropic_distance(&xy.transpose(), dkind, ekind)?;
                row.max_asymmetry = row.max_asymmetry.max((a - a_t).abs());
                let self_d = entropic_distance(&diagonal_joint(&xy.marginal(crate::quantum::Party::A)), dkind, ekind)?;
                row.max_self_distance = row.max_self_distance.max(self_d.abs());
            }
            rows.push(row);
        }
    }
    Ok(rows)
}
