use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::eval::sup_error;
use super::objective::QspObjective;
use super::phases::{wrap_phase, Convention, PhaseFactorSequence, SolverMeta};
use crate::numerics::RandomSource;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Required certified sup error on `[0, 1]`.
    pub tol: f64,
    /// Restarts tried after the symmetric initial guess; the solver stops
    /// early once `tol` is met.
    pub max_restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_restarts: 400,
            max_iterations: 20_000,
            seed: 0,
        }
    }
}

/// Optimise QSP phases so that `P(x) ~ exp(-itx^2)` on `[0, 1]`.
///
/// The first attempt starts from `(pi/4, 0, ..., 0, pi/4)`. Restarts alternate
/// between that point with uniform `+-0.1` noise and a wider draw (`+-1`)
/// around `(0, ..., 0, -pi/2, 0, ..., 0)`, which gives `U(x) = -iZ` for every
/// `x`. The landscape has many local minima, so the best certified sequence is
/// kept and returned as soon as it reaches `tol`.
pub fn solve_phases(t: f64, d: usize, opts: &SolveOptions) -> Result<PhaseFactorSequence> {
    if d == 0 || d % 2 != 0 {
        return Err(Error::invalid(format!("degree must be even and positive, got {d}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let objective = QspObjective::new(t, d)?;
    let mut rng = RandomSource::new(opts.seed);
    let mut symmetric = vec![0.0; d + 1];
    symmetric[0] = FRAC_PI_4;
    symmetric[d] = FRAC_PI_4;
    let mut centred = vec![0.0; d + 1];
    centred[d / 2] = -FRAC_PI_2;

    let mut best: Option<(Vec<f64>, f64, usize)> = None;
    let mut total_iters = 0;
    for attempt in 0..=opts.max_restarts {
        let x0: Vec<f64> = match attempt {
            0 => symmetric.clone(),
            a if a % 2 == 1 => symmetric.iter().map(|v| v + 0.2 * rng.uniform() - 0.1).collect(),
            _ => centred.iter().map(|v| v + 2.0 * rng.uniform() - 1.0).collect(),
        };
        let (x, iters) = lbfgs(
            |x, g| objective.value_and_gradient(x, g),
            x0,
            opts.max_iterations,
        );
        total_iters += iters;
        let phases: Vec<f64> = x.iter().map(|&p| wrap_phase(p)).collect();
        let err = sup_error(&phases, t);
        if best.as_ref().is_none_or(|b| err < b.1) {
            best = Some((phases, err, attempt));
        }
        if err <= opts.tol {
            break;
        }
    }
    let (phases, err, restarts) = best.expect("at least one attempt");
    if err > opts.tol {
        return Err(Error::NoConvergence {
            tol: opts.tol,
            best: err,
            restarts: opts.max_restarts,
            best_phases: phases,
        });
    }
    let mut seq = PhaseFactorSequence::new(t, Convention::Qsp, phases)?;
    seq.sup_error = err;
    seq.solver = SolverMeta {
        seed: opts.seed,
        iterations: total_iters,
        restarts,
    };
    Ok(seq)
}

/// Run the local optimiser from `initial` and return the wrapped phases with
/// their certified error.
pub fn refine_phases(t: f64, initial: &[f64], max_iterations: usize) -> Result<(Vec<f64>, f64)> {
    let objective = QspObjective::new(t, initial.len().saturating_sub(1))?;
    let (x, _) = lbfgs(|x, g| objective.value_and_gradient(x, g), initial.to_vec(), max_iterations);
    let phases: Vec<f64> = x.iter().map(|&p| wrap_phase(p)).collect();
    let err = sup_error(&phases, t);
    Ok((phases, err))
}

const MEMORY: usize = 20;

/// Limited-memory BFGS with a strong-Wolfe line search. Returns the final
/// point and the iteration count.
fn lbfgs(
    mut fg: impl FnMut(&[f64], &mut [f64]) -> f64,
    mut x: Vec<f64>,
    max_iter: usize,
) -> (Vec<f64>, usize) {
    let n = x.len();
    let mut g = vec![0.0; n];
    let mut f = fg(&x, &mut g);
    let mut s_hist: Vec<Vec<f64>> = Vec::with_capacity(MEMORY);
    let mut y_hist: Vec<Vec<f64>> = Vec::with_capacity(MEMORY);
    let mut rho: Vec<f64> = Vec::with_capacity(MEMORY);
    let mut stalled = 0;
    let mut iter = 0;
    while iter < max_iter {
        iter += 1;
        if g.iter().all(|v| v.abs() < 1e-18) || f < 1e-32 {
            break;
        }
        // Two-loop recursion.
        let mut q = g.clone();
        let mut alpha = vec![0.0; s_hist.len()];
        for k in (0..s_hist.len()).rev() {
            alpha[k] = rho[k] * dot(&s_hist[k], &q);
            axpy(-alpha[k], &y_hist[k], &mut q);
        }
        if let (Some(s), Some(y)) = (s_hist.last(), y_hist.last()) {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|v| *v *= gamma);
        }
        for k in 0..s_hist.len() {
            let beta = rho[k] * dot(&y_hist[k], &q);
            axpy(alpha[k] - beta, &s_hist[k], &mut q);
        }
        let mut p: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut dphi0 = dot(&g, &p);
        if !(dphi0 < 0.0) {
            s_hist.clear();
            y_hist.clear();
            rho.clear();
            p = g.iter().map(|v| -v).collect();
            dphi0 = dot(&g, &p);
        }
        let step0 = if s_hist.is_empty() {
            (1.0 / norm(&g)).min(1.0)
        } else {
            1.0
        };
        let Some((_, f_new, x_new, g_new)) = wolfe_search(&mut fg, &x, f, dphi0, &p, step0) else {
            if s_hist.is_empty() {
                break;
            }
            s_hist.clear();
            y_hist.clear();
            rho.clear();
            continue;
        };
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            if s_hist.len() == MEMORY {
                s_hist.remove(0);
                y_hist.remove(0);
                rho.remove(0);
            }
            s_hist.push(s);
            y_hist.push(y);
            rho.push(1.0 / sy);
        }
        if f - f_new <= 1e-16 * f.abs() {
            stalled += 1;
            if stalled >= 10 {
                x = x_new;
                break;
            }
        } else {
            stalled = 0;
        }
        x = x_new;
        f = f_new;
        g = g_new;
    }
    (x, iter)
}

type Trial = (f64, f64, Vec<f64>, Vec<f64>);

const C1: f64 = 1e-4;
const C2: f64 = 0.9;

/// Bracketing strong-Wolfe search; falls back to the best point with
/// sufficient decrease if the curvature condition cannot be met.
fn wolfe_search(
    fg: &mut impl FnMut(&[f64], &mut [f64]) -> f64,
    x: &[f64],
    f0: f64,
    dphi0: f64,
    p: &[f64],
    step0: f64,
) -> Option<Trial> {
    let mut eval = |a: f64| -> (Trial, f64) {
        let xa: Vec<f64> = x.iter().zip(p).map(|(xi, pi)| xi + a * pi).collect();
        let mut ga = vec![0.0; x.len()];
        let fa = fg(&xa, &mut ga);
        let slope = dot(&ga, p);
        ((a, fa, xa, ga), slope)
    };
    let sufficient = |a: f64, fa: f64| fa.is_finite() && fa <= f0 + C1 * a * dphi0;

    let (mut a_prev, mut f_prev, mut d_prev) = (0.0, f0, dphi0);
    let mut best: Option<Trial> = None;
    let mut a = step0;
    let mut bracket = None;
    for i in 0..40 {
        let (trial, d) = eval(a);
        if !sufficient(a, trial.1) || (i > 0 && trial.1 >= f_prev) {
            bracket = Some(((a_prev, f_prev, d_prev), (a, trial.1, d)));
            break;
        }
        if d.abs() <= -C2 * dphi0 {
            return Some(trial);
        }
        if d >= 0.0 {
            bracket = Some(((a, trial.1, d), (a_prev, f_prev, d_prev)));
            best = Some(trial);
            break;
        }
        a_prev = a;
        f_prev = trial.1;
        d_prev = d;
        best = Some(trial);
        a *= 2.0;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return best;
    };
    for _ in 0..60 {
        let (l, h) = if lo.0 < hi.0 { (lo.0, hi.0) } else { (hi.0, lo.0) };
        let width = h - l;
        if width <= 1e-16 * h.max(1e-300) {
            break;
        }
        let mut cand = f64::NAN;
        if hi.1.is_finite() {
            let d1 = lo.2 + hi.2 - 3.0 * (lo.1 - hi.1) / (lo.0 - hi.0);
            let disc = d1 * d1 - lo.2 * hi.2;
            if disc >= 0.0 {
                let d2 = (hi.0 - lo.0).signum() * disc.sqrt();
                cand = hi.0 - (hi.0 - lo.0) * (hi.2 + d2 - d1) / (hi.2 - lo.2 + 2.0 * d2);
            }
        }
        if !(cand > l + 0.1 * width && cand < h - 0.1 * width) {
            cand = 0.5 * (l + h);
        }
        let (trial, d) = eval(cand);
        if !sufficient(cand, trial.1) || trial.1 >= lo.1 {
            hi = (cand, trial.1, d);
        } else {
            if d.abs() <= -C2 * dphi0 {
                return Some(trial);
            }
            if d * (hi.0 - lo.0) >= 0.0 {
                hi = lo;
            }
            lo = (cand, trial.1, d);
            best = Some(trial);
        }
    }
    best
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

