use num_complex::Complex64;

use super::eval::{eval_p, target};
use crate::{Error, Result};

/// Least-squares mismatch between `P(x)` and `exp(-itx^2)` on the positive
/// Chebyshev nodes `x_k = cos((2k-1) pi / (4 d~))`, `d~ = ceil((d+1)/2)`:
///
/// `F(phi) = (1/d~) sum_k |P(x_k) - exp(-i t x_k^2)|^2`.
#[derive(Clone, Debug)]
pub struct QspObjective {
    pub t: f64,
    pub d: usize,
    nodes: Vec<f64>,
    targets: Vec<Complex64>,
}

impl QspObjective {
    pub fn new(t: f64, d: usize) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::invalid("time must be finite"));
        }
        let dt = (d + 1).div_ceil(2);
        let nodes: Vec<f64> = (1..=dt)
            .map(|k| ((2 * k - 1) as f64 * std::f64::consts::PI / (4 * dt) as f64).cos())
            .collect();
        let targets = nodes.iter().map(|&x| target(t, x)).collect();
        Ok(Self { t, d, nodes, targets })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn value(&self, phases: &[f64]) -> f64 {
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.targets)
            .map(|(&x, &f)| (eval_p(x, phases) - f).norm_sqr())
            .sum();
        sum / self.nodes.len() as f64
    }

    /// Value and exact gradient with respect to every phase.
    pub fn value_and_gradient(&self, phases: &[f64], grad: &mut [f64]) -> f64 {
        assert_eq!(grad.len(), phases.len());
        grad.iter_mut().for_each(|g| *g = 0.0);
        let scale = 1.0 / self.nodes.len() as f64;
        let mut total = 0.0;
        self.for_each_node(phases, |res, dp| {
            total += res.norm_sqr();
            for (g, d) in grad.iter_mut().zip(dp) {
                *g += 2.0 * scale * (res.conj() * d).re;
            }
        });
        total * scale
    }

    /// Calls `visit(P(x_k) - target_k, dP(x_k)/dphi)` for every node.
    fn for_each_node(&self, phases: &[f64], mut visit: impl FnMut(Complex64, &[Complex64])) {
        let d = phases.len() - 1;
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let rot: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
        // Row 0 of the product left of each rotation, column 0 of the product right of it.
        let mut left = vec![[zero; 2]; d + 1];
        let mut right = vec![[zero; 2]; d + 1];
        let mut dp = vec![zero; d + 1];
        for (&x, &f) in self.nodes.iter().zip(&self.targets) {
            let s = Complex64::new(0.0, (1.0 - x * x).max(0.0).sqrt());
            let xc = Complex64::new(x, 0.0);
            left[0] = [one, zero];
            for j in 1..=d {
                let [a, b] = left[j - 1];
                let (a, b) = (a * rot[j - 1], b * rot[j - 1].conj());
                left[j] = [a * xc + b * s, a * s + b * xc];
            }
            right[d] = [one, zero];
            for j in (0..d).rev() {
                let [a, b] = right[j + 1];
                let (a, b) = (a * rot[j + 1], b * rot[j + 1].conj());
                right[j] = [xc * a + s * b, s * a + xc * b];
            }
            let p = left[d][0] * rot[d] * right[d][0] + left[d][1] * rot[d].conj() * right[d][1];
            for j in 0..=d {
                dp[j] = i * (left[j][0] * rot[j] * right[j][0] - left[j][1] * rot[j].conj() * right[j][1]);
            }
            visit(p - f, &dp);
        }
    }
}
