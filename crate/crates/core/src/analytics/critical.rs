use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{EigenKernelMatrix, DEFAULT_COEFF_TOL};
use super::legendre::legendre_coeffs;
use super::special::bessel_t_opt;
use crate::{Error, Result};

/// Largest grid spacing accepted by [`critical_times`].
pub const MAX_GRID_STEP: f64 = 0.02;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CriticalPoint {
    pub t: f64,
    pub h1: f64,
    pub h2: f64,
    pub gamma: f64,
    /// `NaN` where `gamma = 0`.
    pub alpha_star: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalTimes {
    pub n: usize,
    /// First downward crossing of `alpha* = 1`, linearly interpolated.
    pub t_thr: Option<f64>,
    /// First local minimum of `alpha*`, refined by a parabola through the
    /// three grid points around it.
    pub t_opt: Option<f64>,
    pub alpha_star_at_opt: Option<f64>,
    pub gamma_at_opt: Option<f64>,
    /// `2 j_{0,1}`, the large-`N` value of `t_opt`.
    pub bessel_t_opt: f64,
    pub curve: Vec<CriticalPoint>,
}

impl CriticalTimes {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,h1,h2,gamma,alpha_star\n");
        for p in &self.curve {
            s.push_str(&format!("{},{},{},{},{}\n", p.t, p.h1, p.h2, p.gamma, p.alpha_star));
        }
        s
    }

    /// Error unless both critical times were found.
    pub fn require_found(&self) -> Result<(f64, f64)> {
        match (self.t_thr, self.t_opt) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::invalid(format!(
                "critical times not found on the grid (t_thr = {:?}, t_opt = {:?})",
                self.t_thr, self.t_opt
            ))),
        }
    }
}

/// `H1`, `H2`, `gamma` and `alpha*` at one `t` for `N = 2^n`.
pub fn critical_point(n: usize, t: f64) -> Result<CriticalPoint> {
    let k = EigenKernelMatrix::new(legendre_coeffs(t, DEFAULT_COEFF_TOL)?, 1 << n)?;
    let (h1, h2) = (k.h_moment(1)?, k.h_moment(2)?);
    let gamma = 2.0 - 5.0 * h1 + 4.0 * h2;
    Ok(CriticalPoint {
        t,
        h1,
        h2,
        gamma,
        alpha_star: if gamma != 0.0 { h1 / gamma } else { f64::NAN },
    })
}

/// `alpha*_t` and `gamma_t` on an ascending grid, with the critical times
/// read off the curve. Missing crossings are reported as `None`.
pub fn critical_times(n: usize, t_grid: &[f64]) -> Result<CriticalTimes> {
    if n < 2 {
        return Err(Error::invalid(format!("need n >= 2, got {n}")));
    }
    if t_grid.len() < 3 {
        return Err(Error::invalid("t grid needs at least three points"));
    }
    for w in t_grid.windows(2) {
        let step = w[1] - w[0];
        if !(step > 0.0 && step <= MAX_GRID_STEP + 1e-12) {
            return Err(Error::invalid(format!(
                "t grid must be ascending with step <= {MAX_GRID_STEP}, found {} -> {}",
                w[0], w[1]
            )));
        }
    }
    let curve = t_grid
        .par_iter()
        .map(|&t| critical_point(n, t))
        .collect::<Result<Vec<_>>>()?;

    let t_thr = curve.windows(2).find_map(|w| {
        let (a, b) = (w[0].alpha_star, w[1].alpha_star);
        (a >= 1.0 && b < 1.0).then(|| w[0].t + (a - 1.0) / (a - b) * (w[1].t - w[0].t))
    });

    let mut t_opt = None;
    let mut alpha_star_at_opt = None;
    let mut gamma_at_opt = None;
    if let Some(i) = (1..curve.len() - 1)
        .find(|&i| curve[i].alpha_star < curve[i - 1].alpha_star && curve[i].alpha_star <= curve[i + 1].alpha_star)
    {
        let (p0, p1, p2) = (curve[i - 1], curve[i], curve[i + 1]);
        let (x, y) = parabola_vertex([p0.t, p1.t, p2.t], [p0.alpha_star, p1.alpha_star, p2.alpha_star]);
        let (lo, hi) = if x < p1.t { (p0, p1) } else { (p1, p2) };
        let w = (x - lo.t) / (hi.t - lo.t);
        t_opt = Some(x);
        alpha_star_at_opt = Some(y);
        gamma_at_opt = Some(lo.gamma + w * (hi.gamma - lo.gamma));
    }

    Ok(CriticalTimes {
        n,
        t_thr,
        t_opt,
        alpha_star_at_opt,
        gamma_at_opt,
        bessel_t_opt: bessel_t_opt(),
        curve,
    })
}

/// Vertex of the parabola through three points, clamped to their span.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d2 - d1) / (x[2] - x[0]);
    if a <= 0.0 {
        return (x[1], y[1]);
    }
    // y = y1 + b (s - x1) + a (s - x1)^2 with b the slope at x1.
    let b = d1 + a * (x[1] - x[0]);
    let s = (x[1] - b / (2.0 * a)).clamp(x[0], x[2]);
    (s, y[1] + b * (s - x[1]) + a * (s - x[1]).powi(2))
}

/// `lo, lo + step, ...` up to `hi` inclusive (within rounding).
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| lo + i as f64 * step).collect()
}
