use num_complex::Complex64;

use crate::{Error, Result};

pub(crate) type M2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `P(x)` and `Q(x)` of the QSP unitary
/// `[[P, i Q sqrt(1-x^2)], [i Q* sqrt(1-x^2), P*]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QspPointValue {
    pub p: Complex64,
    pub q: Complex64,
}

/// `exp(-i t x^2)`.
pub fn target(t: f64, x: f64) -> Complex64 {
    Complex64::from_polar(1.0, -t * x * x)
}

pub fn qsp_eval(x: f64, phases: &[f64]) -> Result<QspPointValue> {
    if phases.is_empty() {
        return Err(Error::invalid("phase sequence is empty"));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("x = {x} outside [-1, 1]")));
    }
    let (p, q) = eval_pq(x, phases);
    Ok(QspPointValue { p, q })
}

/// `(P, Q)` by the three-term update; well defined at `x = +-1` where the
/// off-diagonal entry vanishes.
pub(crate) fn eval_pq(x: f64, phases: &[f64]) -> (Complex64, Complex64) {
    let s2 = 1.0 - x * x;
    let mut p = Complex64::from_polar(1.0, phases[0]);
    let mut q = ZERO;
    for &phi in &phases[1..] {
        let np = p * x - q * s2;
        let nq = p + q * x;
        p = np * Complex64::from_polar(1.0, phi);
        q = nq * Complex64::from_polar(1.0, -phi);
    }
    (p, q)
}

pub(crate) fn eval_p(x: f64, phases: &[f64]) -> Complex64 {
    eval_pq(x, phases).0
}

pub(crate) fn mul2(a: &M2, b: &M2) -> M2 {
    let mut c = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub(crate) fn w_matrix(x: f64) -> M2 {
    let s = Complex64::new(0.0, (1.0 - x * x).max(0.0).sqrt());
    [[Complex64::new(x, 0.0), s], [s, Complex64::new(x, 0.0)]]
}

pub(crate) fn z_rotation(phi: f64) -> M2 {
    [[Complex64::from_polar(1.0, phi), ZERO], [ZERO, Complex64::from_polar(1.0, -phi)]]
}

/// The full 2x2 QSP unitary by explicit matrix products.
pub fn qsp_matrix(x: f64, phases: &[f64]) -> Result<[[Complex64; 2]; 2]> {
    qsp_eval(x, phases)?;
    let w = w_matrix(x);
    let mut u = z_rotation(phases[0]);
    for &phi in &phases[1..] {
        u = mul2(&mul2(&u, &w), &z_rotation(phi));
    }
    Ok(u)
}

/// `max_{x in [0,1]} |P(x) - exp(-itx^2)|`.
///
/// Scans `10 d + 1` Chebyshev points (uniform in `theta = arccos x`) and then
/// refines every prominent local maximum by golden-section search, so the
/// value is the true supremum to near machine precision rather than a grid
/// lower bound.
pub fn sup_error(phases: &[f64], t: f64) -> f64 {
    let d = phases.len().saturating_sub(1).max(1);
    let m = (10 * d).max(32);
    let err = |theta: f64| (eval_p(theta.cos(), phases) - target(t, theta.cos())).norm();
    let h = std::f64::consts::FRAC_PI_2 / m as f64;
    let vals: Vec<f64> = (0..=m).map(|j| err(j as f64 * h)).collect();
    let top = vals.iter().cloned().fold(0.0f64, f64::max);
    let mut best = top;
    for j in 0..=m {
        let left = if j > 0 { vals[j - 1] } else { f64::NEG_INFINITY };
        let right = if j < m { vals[j + 1] } else { f64::NEG_INFINITY };
        if vals[j] >= left && vals[j] >= right && vals[j] >= 0.25 * top {
            let lo = (j as f64 - 1.0).max(0.0) * h;
            let hi = (j as f64 + 1.0).min(m as f64) * h;
            best = best.max(golden_max(&err, lo, hi));
        }
    }
    best
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.max(fd).max(f(a)).max(f(b));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        best = best.max(fc).max(fd);
        if (b - a).abs() < 1e-14 {
            break;
        }
    }
    best
}
