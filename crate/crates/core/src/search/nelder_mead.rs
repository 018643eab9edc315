//! Nelder-Mead simplex descent with dimension-adaptive coefficients,
//! restarted from its own optimum until a restart no longer improves the
//! objective.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    pub max_evals: usize,
    /// Stop once the simplex spread, or the gain of a whole restart, falls
    /// below this.
    pub ftol: f64,
}

#[derive(Debug, Clone)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
}

pub fn minimize<F>(mut f: F, x0: &[f64], opts: NelderMeadOptions) -> NelderMeadOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let mut evals = 0usize;
    let mut best_x = x0.to_vec();
    let mut best_f = f(&best_x);
    evals += 1;
    let mut step = opts.initial_step;
    while evals < opts.max_evals {
        let before = best_f;
        let (x, fx) = descend(&mut f, &best_x, best_f, step, opts, &mut evals);
        if fx < best_f {
            best_x = x;
            best_f = fx;
        }
        if !(before - best_f > opts.ftol) {
            break;
        }
        step = (step * 0.5).max(1e-3);
    }
    NelderMeadOutcome {
        x: best_x,
        fx: best_f,
        evals,
    }
}

fn descend<F>(
    f: &mut F,
    x0: &[f64],
    f0: f64,
    step: f64,
    opts: NelderMeadOptions,
    evals: &mut usize,
) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    vals.push(f0);
    for i in 0..n {
        if *evals >= opts.max_evals {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += step;
        vals.push(f(&x));
        pts.push(x);
        *evals += 1;
    }
    if pts.len() < n + 1 {
        return argmin(pts, vals);
    }

    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    loop {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        let (ib, isw, iw) = (order[0], order[n - 1], order[n]);
        if *evals >= opts.max_evals || vals[iw] - vals[ib] <= opts.ftol {
            break;
        }
        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&pts[i]) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= nf);

        let worst = &pts[iw];
        for k in 0..n {
            trial[k] = centroid[k] + alpha * (centroid[k] - worst[k]);
        }
        let fr = f(&trial);
        *evals += 1;

        if fr < vals[ib] {
            if *evals >= opts.max_evals {
                pts[iw].copy_from_slice(&trial);
                vals[iw] = fr;
                break;
            }
            for k in 0..n {
                trial2[k] = centroid[k] + gamma * (trial[k] - centroid[k]);
            }
            let fe = f(&trial2);
            *evals += 1;
            if fe < fr {
                pts[iw].copy_from_slice(&trial2);
                vals[iw] = fe;
            } else {
                pts[iw].copy_from_slice(&trial);
                vals[iw] = fr;
            }
            continue;
        }
        if fr < vals[isw] {
            pts[iw].copy_from_slice(&trial);
            vals[iw] = fr;
            continue;
        }
        if *evals >= opts.max_evals {
            if fr < vals[iw] {
                pts[iw].copy_from_slice(&trial);
                vals[iw] = fr;
            }
            break;
        }
        let outside = fr < vals[iw];
        for k in 0..n {
            trial2[k] = if outside {
                centroid[k] + rho * (trial[k] - centroid[k])
            } else {
                centroid[k] + rho * (pts[iw][k] - centroid[k])
            };
        }
        let fc = f(&trial2);
        *evals += 1;
        let accept = if outside { fc <= fr } else { fc < vals[iw] };
        if accept {
            pts[iw].copy_from_slice(&trial2);
            vals[iw] = fc;
            continue;
        }
        // shrink toward the best vertex
        let xb = pts[ib].clone();
        for &i in &order[1..] {
            if *evals >= opts.max_evals {
                break;
            }
            for k in 0..n {
                pts[i][k] = xb[k] + sigma * (pts[i][k] - xb[k]);
            }
            vals[i] = f(&pts[i]);
            *evals += 1;
        }
    }
    argmin(pts, vals)
}

fn argmin(pts: Vec<Vec<f64>>, vals: Vec<f64>) -> (Vec<f64>, f64) {
    let mut best = 0;
    for i in 1..vals.len() {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    (pts[best].clone(), vals[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(max_evals: usize) -> NelderMeadOptions {
        NelderMeadOptions {
            initial_step: 0.5,
            max_evals,
            ftol: 1e-12,
        }
    }

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 1.0).powi(2)).sum::<f64>();
        let out = minimize(f, &[0.0; 6], opts(20_000));
        assert!(out.fx < 1e-9, "{out:?}");
        assert!(out.x.iter().all(|v| (v - 1.0).abs() < 1e-4));
    }

    #[test]
    fn rosenbrock_2d() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = minimize(f, &[-1.2, 1.0], opts(5_000));
        assert!(out.fx < 1e-8, "{out:?}");
    }

    #[test]
    fn respects_budget() {
        let mut calls = 0;
        let out = minimize(
            |x: &[f64]| {
                calls += 1;
                x.iter().map(|v| v.sin()).sum()
            },
            &[0.3; 10],
            opts(37),
        );
        assert!(out.evals <= 37);
        assert_eq!(calls, out.evals);
    }
}
