use num_complex::Complex64;
use serde::Serialize;

use super::special::{gauss_legendre, legendre_values};
use crate::{Error, Result};

/// `exp(-itx) ~ sum_{q <= D} c_q P_q(2x - 1)` on `[0, 1]`.
#[derive(Clone, Debug, Serialize)]
pub struct LegendreCoeffs {
    pub t: f64,
    pub cutoff: usize,
    pub coeffs: Vec<Complex64>,
    /// `sum_{q > D} |c_q|` over the computed tail, which bounds the
    /// truncation error since `|P_q| <= 1`.
    pub error_bound: f64,
    /// Largest deviation measured on a 1000-point grid.
    pub grid_error: f64,
}

impl LegendreCoeffs {
    pub fn eval(&self, x: f64) -> Complex64 {
        let p = legendre_values(self.cutoff, 2.0 * x - 1.0);
        self.coeffs.iter().zip(&p).map(|(c, p)| c * p).sum()
    }

    pub fn conj(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.conj()).collect()
    }
}

/// `c_q = (2q + 1) int_0^1 exp(-itx) P_q(2x - 1) dx` by Gauss-Legendre
/// quadrature, truncated where `|c_q|` falls below `tol / 10` for good.
pub fn legendre_coeffs(t: f64, tol: f64) -> Result<LegendreCoeffs> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if tol < 1e-14 {
        return Err(Error::PrecisionLimit(format!(
            "Legendre tolerance {tol:e} is below double precision"
        )));
    }
    if !t.is_finite() {
        return Err(Error::invalid("t must be finite"));
    }
    // The coefficients decay super-exponentially once q exceeds about e|t|/4;
    // the scan window stays well past that.
    let q_max = 40 + (2.0 * t.abs()).ceil() as usize;
    let order = q_max + 32;
    let (nodes, weights) = gauss_legendre(order);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); q_max + 1];
    for (&u, &w) in nodes.iter().zip(&weights) {
        let x = 0.5 * (u + 1.0);
        let f = Complex64::from_polar(0.5 * w, -t * x);
        for (c, p) in coeffs.iter_mut().zip(legendre_values(q_max, u)) {
            *c += f * p;
        }
    }
    for (q, c) in coeffs.iter_mut().enumerate() {
        *c *= (2 * q + 1) as f64;
    }
    let cutoff = coeffs.iter().rposition(|c| c.norm() >= tol / 10.0).unwrap_or(0);
    let error_bound = coeffs[cutoff + 1..].iter().map(|c| c.norm()).sum::<f64>();
    coeffs.truncate(cutoff + 1);
    let mut out = LegendreCoeffs {
        t,
        cutoff,
        coeffs,
        error_bound,
        grid_error: 0.0,
    };
    out.grid_error = (0..=1000)
        .map(|i| {
            let x = i as f64 / 1000.0;
            (out.eval(x) - Complex64::from_polar(1.0, -t * x)).norm()
        })
        .fold(0.0, f64::max);
    if out.grid_error > tol {
        return Err(Error::PrecisionLimit(format!(
            "Legendre reconstruction error {:e} exceeds {tol:e} at t = {t}",
            out.grid_error
        )));
    }
    Ok(out)
}
