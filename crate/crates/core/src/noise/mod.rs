//! Digital depolarizing noise: stochastic Pauli trajectories, an exact
//! density-matrix path for small registers, the reference fidelity and the
//! global depolarizing map.

mod density;
mod expanded;
mod histogram;
mod trajectory;

use serde::{Deserialize, Serialize};

use crate::mqsvt::OutputDistribution;
use crate::{Error, Result};

pub use density::{exact_noisy_distribution, MAX_DENSITY_QUBITS};
pub use expanded::ExpandedCircuit;
pub use histogram::Histogram;
pub use trajectory::{simulate_noisy, TrajectorySimulator};

/// Depolarizing rates applied after every one- and two-qubit gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub r1: f64,
    pub r2: f64,
}

impl NoiseModel {
    /// Two-qubit rate `r2` with the one-qubit rate at `r2 / 10`.
    pub fn new(r2: f64) -> Result<Self> {
        Self::with_rates(r2 / 10.0, r2)
    }

    pub fn with_rates(r1: f64, r2: f64) -> Result<Self> {
        for (name, r) in [("r1", r1), ("r2", r2)] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::invalid(format!("{name} must lie in [0, 1], got {r}")));
            }
        }
        Ok(Self { r1, r2 })
    }

    pub fn noiseless() -> Self {
        Self { r1: 0.0, r2: 0.0 }
    }

    pub(crate) fn rate(&self, two_qubit: bool) -> f64 {
        if two_qubit {
            self.r2
        } else {
            self.r1
        }
    }
}

/// `(1 - r1)^(2d (g1 + 1)) (1 - r2)^(2d g2)`, with `g1`, `g2` counted on the
/// `U_A` circuit and `d` the number of queries. The `+ 1` is the ancilla
/// rotation that accompanies every query.
pub fn alpha_ref(g1: usize, g2: usize, queries: usize, noise: &NoiseModel) -> f64 {
    let two_d = 2.0 * queries as f64;
    let one = two_d * (g1 as f64 + 1.0) * (-noise.r1).ln_1p();
    let two = two_d * g2 as f64 * (-noise.r2).ln_1p();
    (one + two).exp()
}

/// `alpha p(x) + (1 - alpha) / 2^(n+1)` for every `(n+1)`-bit string.
pub fn global_depolarize(dist: &OutputDistribution, alpha: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let uniform = (1.0 - alpha) / dist.probabilities.len() as f64;
    Ok(dist.probabilities.iter().map(|p| alpha * p + uniform).collect())
}
