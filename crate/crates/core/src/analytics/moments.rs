use serde::{Deserialize, Serialize};

/// Cosine-transform moments `H1`, `H2` of the eigenvalue marginals at time
/// `t`, with everything the benchmark derives from them. `n_dim` is the
/// system dimension `N = 2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HMoments {
    pub t: f64,
    pub n_dim: usize,
    pub h1: f64,
    pub h2: f64,
}

impl HMoments {
    pub fn new(t: f64, n_dim: usize, h1: f64, h2: f64) -> Self {
        Self { t, n_dim, h1, h2 }
    }

    /// `gamma = 2 - 5 H1 + 4 H2`.
    pub fn gamma(&self) -> f64 {
        2.0 - 5.0 * self.h1 + 4.0 * self.h2
    }

    /// `H1 / gamma`, or `None` when `gamma = 0`.
    pub fn alpha_star(&self) -> Option<f64> {
        let g = self.gamma();
        (g != 0.0).then(|| self.h1 / g)
    }

    fn n(&self) -> f64 {
        self.n_dim as f64
    }

    /// `E[p(U, 0^n)]`.
    pub fn mean_p0(&self) -> f64 {
        let n = self.n();
        (n - 1.0) / (n + 1.0) * self.h1 + 2.0 / (n + 1.0)
    }

    /// `E[sum_{x != 0^n} p(U, x)]`.
    pub fn mean_sum_p(&self) -> f64 {
        let n = self.n();
        (n - 1.0) / (n + 1.0) * (1.0 - self.h1)
    }

    /// `E[p(U, 0^n)^2]`.
    pub fn mean_p0_sq(&self) -> f64 {
        let n = self.n();
        let d = (n + 1.0) * (n + 2.0) * (n + 3.0);
        12.0 / ((n + 2.0) * (n + 3.0))
            + 12.0 * n * (n - 1.0) * self.h1 / d
            + (n - 1.0) * (n - 2.0) * (n - 3.0) / d * self.h2
    }

    /// `E[sum_{x != 0^n} p(U, x)^2]`.
    pub fn mean_sum_p_sq(&self) -> f64 {
        let n = self.n();
        let d = n * (n + 1.0) * (n + 2.0) * (n + 3.0);
        2.0 * (n - 1.0) * (n * n + 3.0 * n + 6.0) / d - 4.0 * (n - 1.0) * (n * n - n + 6.0) * self.h1 / d
            + 2.0 * (n - 1.0) * (n - 2.0) * (n - 3.0) / d * self.h2
    }
}
