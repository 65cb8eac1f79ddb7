//! Box-constrained maximization of a black-box objective.
//!
//! Projected quasi-Newton ascent (BFGS inverse-Hessian approximation,
//! backtracking line search, projection onto the box) with central-difference
//! gradients, followed by an interior Newton polish that drives the gradient
//! toward first-order optimality. Objectives may return `-inf` for
//! infeasible points; the line search treats that as a plain rejection.

#[derive(Debug, Clone)]
pub(crate) struct MaximizeOptions {
    pub max_iterations: usize,
    /// Relative objective-change tolerance.
    pub rel_tol: f64,
    /// Gradient infinity-norm tolerance, scaled by max(1, |f|).
    pub grad_tol: f64,
    /// Base central-difference step; per-coordinate step is fd_step * (1 + |x_i|).
    pub fd_step: f64,
    pub polish_iterations: usize,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            rel_tol: 1e-10,
            grad_tol: 1e-8,
            fd_step: 1e-6,
            polish_iterations: 12,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct MaximizeOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 45;
const BOUND_EPS: f64 = 1e-12;

fn eval_counted(f: &mut dyn FnMut(&[f64]) -> f64, x: &[f64], evals: &mut usize) -> f64 {
    *evals += 1;
    f(x)
}

pub(crate) fn maximize_box(
    f: &mut dyn FnMut(&[f64]) -> f64,
    start: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &MaximizeOptions,
) -> MaximizeOutcome {
    let n = start.len();
    debug_assert!(lower.len() == n && upper.len() == n);
    let mut evals = 0usize;

    let clamp = |x: &mut [f64]| {
        for i in 0..n {
            x[i] = x[i].clamp(lower[i], upper[i]);
        }
    };

    let mut x = start.to_vec();
    clamp(&mut x);
    let mut fval = eval_counted(f, &x, &mut evals);
    let mut g = central_gradient(f, &x, lower, upper, opts.fd_step, &mut evals);
    // initial curvature guess scaled to the box so the first steps can
    // travel a sensible fraction of each coordinate's width
    let scales: Vec<f64> = (0..n)
        .map(|i| {
            (0.1 * (upper[i] - lower[i]))
                .min(1.0 + start[i].abs())
                .max(1e-3)
        })
        .collect();
    let scaled_identity = |scales: &[f64]| -> Vec<Vec<f64>> {
        let mut m = identity(n);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = scales[i] * scales[i];
        }
        m
    };
    let mut h_inv = scaled_identity(&scales);
    let mut converged = false;
    let mut line_search_failed = false;
    let mut small_steps = 0usize;
    let mut iterations = 0usize;

    for _ in 0..opts.max_iterations {
        iterations += 1;
        let pg = project_gradient(&g, &x, lower, upper);
        if inf_norm(&pg) <= opts.grad_tol * fval.abs().max(1.0) {
            converged = true;
            break;
        }

        let mut dir = mat_vec(&h_inv, &g);
        if dot(&dir, &pg) <= 0.0 {
            dir = pg.clone();
            h_inv = scaled_identity(&scales);
        }

        let mut accepted = None;
        for steepest_retry in 0..2 {
            let d = if steepest_retry == 0 { &dir } else { &pg };
            let mut alpha = 1.0;
            for _ in 0..MAX_BACKTRACKS {
                let mut cand: Vec<f64> =
                    x.iter().zip(d).map(|(&xi, &di)| xi + alpha * di).collect();
                clamp(&mut cand);
                let step: Vec<f64> = cand.iter().zip(&x).map(|(&c, &xi)| c - xi).collect();
                let predicted = dot(&g, &step);
                if inf_norm(&step) == 0.0 || predicted <= 0.0 {
                    break;
                }
                let fc = eval_counted(f, &cand, &mut evals);
                if fc.is_finite() && fc >= fval + ARMIJO_C1 * predicted {
                    accepted = Some((cand, fc));
                    break;
                }
                alpha *= 0.5;
            }
            if accepted.is_some() {
                break;
            }
        }

        let Some((x_new, f_new)) = accepted else {
            // no ascent step along either direction: progress has hit the
            // objective's noise floor; the polish below settles whether the
            // point is first-order optimal
            line_search_failed = true;
            break;
        };

        let g_new = central_gradient(f, &x_new, lower, upper, opts.fd_step, &mut evals);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        // curvature pair in minimization convention: y = -(g_new - g)
        let y: Vec<f64> = g.iter().zip(&g_new).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            bfgs_update(&mut h_inv, &s, &y, sy);
        } else {
            h_inv = scaled_identity(&scales);
        }

        let delta = (f_new - fval).abs();
        let stalled = delta <= opts.rel_tol * (1.0 + fval.abs());
        x = x_new;
        g = g_new;
        fval = f_new;
        if stalled {
            small_steps += 1;
            if small_steps >= 2 {
                converged = true;
                break;
            }
        } else {
            small_steps = 0;
        }
    }

    // Newton polish over the coordinates away from their bounds.
    let mut newton_step = f64::INFINITY;
    if n <= 8 && (converged || line_search_failed || iterations >= opts.max_iterations) {
        newton_step = newton_polish(f, &mut x, &mut fval, lower, upper, opts, &mut evals);
    }
    if !converged {
        // first-order judgment at the polished point: either the gradient
        // is negligible on the objective's scale, or the full Newton step
        // (the distance-to-optimum estimate, scale-free) is below rounding
        let g = central_gradient(f, &x, lower, upper, opts.fd_step, &mut evals);
        let pg = project_gradient(&g, &x, lower, upper);
        let xspan = 1.0 + inf_norm(&x);
        converged =
            inf_norm(&pg) <= opts.grad_tol * fval.abs().max(1.0) || newton_step <= 1e-9 * xspan;
    }

    MaximizeOutcome {
        x,
        value: fval,
        iterations,
        evaluations: evals,
        converged,
    }
}

/// Returns the infinity norm of the last attempted full Newton step, an
/// estimate of the remaining distance to the stationary point.
fn newton_polish(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x: &mut Vec<f64>,
    fval: &mut f64,
    lower: &[f64],
    upper: &[f64],
    opts: &MaximizeOptions,
    evals: &mut usize,
) -> f64 {
    let n = x.len();
    let mut last_step = f64::INFINITY;
    for _ in 0..opts.polish_iterations {
        let g = central_gradient(f, x, lower, upper, opts.fd_step, evals);
        let free: Vec<usize> = (0..n)
            .filter(|&i| {
                let span = 1.0 + x[i].abs();
                x[i] - lower[i] > 1e-9 * span && upper[i] - x[i] > 1e-9 * span
            })
            .collect();
        if free.is_empty() {
            return last_step;
        }
        let gnorm = free.iter().map(|&i| g[i].abs()).fold(0.0, f64::max);
        if gnorm <= opts.grad_tol * fval.abs().max(1.0) {
            return 0.0;
        }

        // FD Hessian over the free coordinates; step sized for second
        // differences (objective noise ~ eps * |f|).
        let m = free.len();
        let mut hess = vec![vec![0.0; m]; m];
        let h: Vec<f64> = free
            .iter()
            .map(|&i| {
                (1e-4 * (1.0 + x[i].abs()))
                    .min(0.5 * (upper[i] - x[i]))
                    .min(0.5 * (x[i] - lower[i]))
                    .max(1e-9)
            })
            .collect();
        let f0 = *fval;
        let mut shifted = |deltas: &[(usize, f64)], evals: &mut usize| {
            let mut p = x.clone();
            for &(idx, d) in deltas {
                p[free[idx]] = (p[free[idx]] + d).clamp(lower[free[idx]], upper[free[idx]]);
            }
            eval_counted(f, &p, evals)
        };
        let mut ill = false;
        for a in 0..m {
            let fp = shifted(&[(a, h[a])], evals);
            let fm = shifted(&[(a, -h[a])], evals);
            if !fp.is_finite() || !fm.is_finite() {
                ill = true;
                break;
            }
            hess[a][a] = (fp - 2.0 * f0 + fm) / (h[a] * h[a]);
            for b in a + 1..m {
                let fpp = shifted(&[(a, h[a]), (b, h[b])], evals);
                let fpm = shifted(&[(a, h[a]), (b, -h[b])], evals);
                let fmp = shifted(&[(a, -h[a]), (b, h[b])], evals);
                let fmm = shifted(&[(a, -h[a]), (b, -h[b])], evals);
                if ![fpp, fpm, fmp, fmm].iter().all(|v| v.is_finite()) {
                    ill = true;
                    break;
                }
                let v = (fpp - fpm - fmp + fmm) / (4.0 * h[a] * h[b]);
                hess[a][b] = v;
                hess[b][a] = v;
            }
            if ill {
                break;
            }
        }
        if ill {
            return last_step;
        }

        // Newton step: solve (-H) delta = g_free
        let mut rhs: Vec<f64> = free.iter().map(|&i| g[i]).collect();
        let mut neg = hess.clone();
        for row in neg.iter_mut() {
            for v in row.iter_mut() {
                *v = -*v;
            }
        }
        if !solve_in_place(&mut neg, &mut rhs) {
            return last_step;
        }

        last_step = inf_norm(&rhs);

        let mut improved = false;
        let mut scale = 1.0;
        for _ in 0..8 {
            let mut cand = x.clone();
            for (idx, &i) in free.iter().enumerate() {
                cand[i] = (cand[i] + scale * rhs[idx]).clamp(lower[i], upper[i]);
            }
            let fc = eval_counted(f, &cand, evals);
            // accept anything not measurably worse; near the optimum the
            // objective moves below rounding noise while the gradient shrinks
            if fc.is_finite() && fc >= *fval - 1e-11 * (1.0 + fval.abs()) {
                let step = free
                    .iter()
                    .map(|&i| (cand[i] - x[i]).abs())
                    .fold(0.0, f64::max);
                *x = cand;
                *fval = fc;
                improved = step > 0.0;
                break;
            }
            scale *= 0.25;
        }
        if !improved {
            return last_step;
        }
    }
    last_step
}

fn central_gradient(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x: &[f64],
    lower: &[f64],
    upper: &[f64],
    base_step: f64,
    evals: &mut usize,
) -> Vec<f64> {
    let n = x.len();
    let mut g = vec![0.0; n];
    let mut point = x.to_vec();
    for i in 0..n {
        let h = base_step * (1.0 + x[i].abs());
        let hi = (x[i] + h).min(upper[i]);
        let lo = (x[i] - h).max(lower[i]);
        if hi <= lo {
            g[i] = 0.0;
            continue;
        }
        point[i] = hi;
        *evals += 1;
        let f_hi = f(&point);
        point[i] = lo;
        *evals += 1;
        let f_lo = f(&point);
        point[i] = x[i];
        g[i] = if f_hi.is_finite() && f_lo.is_finite() {
            (f_hi - f_lo) / (hi - lo)
        } else if f_hi.is_finite() {
            // fall back to a one-sided difference against the center
            *evals += 1;
            let f0 = f(&point);
            if f0.is_finite() {
                (f_hi - f0) / (hi - x[i]).max(1e-300)
            } else {
                0.0
            }
        } else if f_lo.is_finite() {
            *evals += 1;
            let f0 = f(&point);
            if f0.is_finite() {
                (f0 - f_lo) / (x[i] - lo).max(1e-300)
            } else {
                0.0
            }
        } else {
            0.0
        };
    }
    g
}

/// Zeroes gradient components that push out of the box at an active bound.
fn project_gradient(g: &[f64], x: &[f64], lower: &[f64], upper: &[f64]) -> Vec<f64> {
    g.iter()
        .enumerate()
        .map(|(i, &gi)| {
            let span = 1.0 + x[i].abs();
            let at_lower = x[i] - lower[i] <= BOUND_EPS * span;
            let at_upper = upper[i] - x[i] <= BOUND_EPS * span;
            if (at_lower && gi < 0.0) || (at_upper && gi > 0.0) {
                0.0
            } else {
                gi
            }
        })
        .collect()
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy = mat_vec(h, y);
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i][j] += -rho * (s[i] * hy[j] + hy[i] * s[j])
                + rho * rho * yhy * s[i] * s[j]
                + rho * s[i] * s[j];
        }
    }
}

/// Gaussian elimination with partial pivoting; returns false when singular.
#[allow(clippy::needless_range_loop)]
fn solve_in_place(a: &mut [Vec<f64>], b: &mut [f64]) -> bool {
    let n = b.len();
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-300 {
            return false;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    for col in (0..n).rev() {
        for k in col + 1..n {
            b[col] -= a[col][k] * b[k];
        }
        b[col] /= a[col][col];
    }
    true
}
