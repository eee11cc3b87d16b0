//! The minimal QSVT circuit: one ancilla, `d` queries to `U_A` and `d` to
//! `U_A^dagger`, interleaved with `2d + 1` ancilla Z-rotations.
//!
//! Operator order (rightmost acts first on the state):
//!
//! `M = R(phi_0) U^dagger R(phi_1) U R(phi_2) ... U^dagger R(phi_{2d-1}) U R(phi_{2d})`
//!
//! with `R(phi) = exp(i phi Z)` on the ancilla (qubit 0, the most significant
//! bit). With circuit-convention phases the top-left block of `M` is
//! `(-1)^d V P(Sigma) V^dagger`, where `A = W Sigma V^dagger` is the block of
//! `U_A` and `P` the QSP polynomial. The sign is a global phase of the whole
//! circuit; [`MqsvtInstance::encoded_block`] removes it so the block
//! approximates `exp(-itA^dagger A)` directly.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{circuit_unitary, CircuitSpec};
use crate::numerics::{check_dim, ComplexMatrix, SpectralDecomposition};
use crate::qsp::{Convention, PhaseFactorSequence};
use crate::{Error, Result};

/// One element of the assembled circuit, in application order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MqsvtStep {
    /// `exp(i phi Z)` on the ancilla.
    Rotation(f64),
    Query,
    QueryAdjoint,
}

#[derive(Clone, Debug)]
pub struct MqsvtInstance {
    /// System qubits; the full register has `n + 1`.
    pub n: usize,
    pub u_a: ComplexMatrix,
    /// Gate list of `U_A` when it came from a circuit, used by the noisy simulator.
    pub circuit: Option<CircuitSpec>,
    /// Circuit-convention phases, `2d + 1` of them.
    pub phases: PhaseFactorSequence,
}

impl MqsvtInstance {
    /// Phases may be in either convention; they are stored in the circuit one.
    pub fn new(u_a: ComplexMatrix, phases: &PhaseFactorSequence) -> Result<Self> {
        let dim = u_a.nrows();
        if dim != u_a.ncols() || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "U_A must be square with power-of-two dimension, got {}x{}",
                u_a.nrows(),
                u_a.ncols()
            )));
        }
        check_dim(dim)?;
        if phases.degree() % 2 != 0 || phases.degree() == 0 {
            return Err(Error::invalid(format!(
                "need 2d + 1 phases with d >= 1, got {}",
                phases.phases.len()
            )));
        }
        let phases = phases.to_convention(Convention::Circuit)?;
        Ok(Self {
            n: dim.trailing_zeros() as usize - 1,
            u_a,
            circuit: None,
            phases,
        })
    }

    pub fn from_circuit(circuit: CircuitSpec, phases: &PhaseFactorSequence) -> Result<Self> {
        let u_a = circuit_unitary(&circuit)?;
        let mut inst = Self::new(u_a, phases)?;
        inst.circuit = Some(circuit);
        Ok(inst)
    }

    /// Queries to `U_A` (and equally many to `U_A^dagger`).
    pub fn queries(&self) -> usize {
        self.phases.queries()
    }

    pub fn t(&self) -> f64 {
        self.phases.t
    }

    /// Certified approximation error of the phases (NaN if unknown).
    pub fn epsilon(&self) -> f64 {
        self.phases.sup_error
    }

    /// The circuit in application order. `R(phi_{2d})` acts first; on the
    /// all-zero input it only contributes a global phase, so it may be dropped.
    pub fn steps(&self, include_last_rotation: bool) -> Vec<MqsvtStep> {
        let phi = &self.phases.phases;
        let last = phi.len() - 1;
        let mut steps = Vec::with_capacity(phi.len() + 2 * self.queries());
        if include_last_rotation {
            steps.push(MqsvtStep::Rotation(phi[last]));
        }
        for j in (0..last).rev() {
            // Between phi_j and phi_{j+1} sits U for odd j, U^dagger for even j.
            steps.push(if j % 2 == 1 { MqsvtStep::Query } else { MqsvtStep::QueryAdjoint });
            steps.push(MqsvtStep::Rotation(phi[j]));
        }
        steps
    }

    /// `(-1)^d`, the global phase between the circuit and the encoding of `P`.
    pub fn global_sign(&self) -> f64 {
        if self.queries() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// The full `2^(n+1)`-dimensional circuit unitary.
    pub fn unitary(&self) -> ComplexMatrix {
        let dim = self.u_a.nrows();
        let adj = self.u_a.adjoint();
        let mut m = ComplexMatrix::identity(dim, dim);
        for step in self.steps(true) {
            match step {
                MqsvtStep::Rotation(phi) => rotate_rows(&mut m, phi),
                MqsvtStep::Query => m = &self.u_a * m,
                MqsvtStep::QueryAdjoint => m = &adj * m,
            }
        }
        m
    }

    /// Top-left `2^n` block of the circuit times the global sign:
    /// `V P(Sigma) V^dagger ~ exp(-it A^dagger A)`.
    pub fn encoded_block(&self) -> ComplexMatrix {
        let n = self.u_a.nrows() / 2;
        self.unitary().view((0, 0), (n, n)).into_owned() * Complex64::new(self.global_sign(), 0.0)
    }

    /// `|psi> = M |0^{n+1}>`, dropping the phase of the first rotation.
    pub fn output_state(&self) -> Vec<Complex64> {
        let dim = self.u_a.nrows();
        let adj = self.u_a.adjoint();
        let mut s = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        s[0] = Complex64::new(1.0, 0.0);
        for step in self.steps(false) {
            match step {
                MqsvtStep::Rotation(phi) => rotate_state(s.as_mut_slice(), phi),
                MqsvtStep::Query => s = &self.u_a * s,
                MqsvtStep::QueryAdjoint => s = &adj * s,
            }
        }
        s.iter().copied().collect()
    }

    pub fn output_distribution(&self) -> OutputDistribution {
        OutputDistribution::from_state(self.n, &self.output_state())
    }
}

/// Multiply by `exp(i phi Z)` on the most significant qubit.
fn rotate_rows(m: &mut ComplexMatrix, phi: f64) {
    let half = m.nrows() / 2;
    let (up, down) = (Complex64::from_polar(1.0, phi), Complex64::from_polar(1.0, -phi));
    for (i, mut row) in m.row_iter_mut().enumerate() {
        row *= if i < half { up } else { down };
    }
}

fn rotate_state(s: &mut [Complex64], phi: f64) {
    let half = s.len() / 2;
    let (up, down) = (Complex64::from_polar(1.0, phi), Complex64::from_polar(1.0, -phi));
    s[..half].iter_mut().for_each(|a| *a *= up);
    s[half..].iter_mut().for_each(|a| *a *= down);
}

/// Measurement probabilities of all `n + 1` qubits; index bit `n` (the most
/// significant) is the ancilla.
#[derive(Clone, Debug, Serialize)]
pub struct OutputDistribution {
    pub n: usize,
    pub probabilities: Vec<f64>,
}

impl OutputDistribution {
    pub fn from_state(n: usize, state: &[Complex64]) -> Self {
        Self {
            n,
            probabilities: state.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// `p(U, x)` for every system string `x` with the ancilla measured 0.
    pub fn system(&self) -> &[f64] {
        &self.probabilities[..self.probabilities.len() / 2]
    }

    /// `P(U)`, the probability of the ancilla reading 0.
    pub fn success_probability(&self) -> f64 {
        self.system().iter().sum()
    }

    /// `p(U, x) / P(U)`.
    pub fn conditional(&self) -> Vec<f64> {
        let total = self.success_probability();
        self.system().iter().map(|p| p / total).collect()
    }

    /// `sum_{x != 0^n} p(U, x)`.
    pub fn nonzero_mass(&self) -> f64 {
        self.system()[1..].iter().sum()
    }
}

/// `V exp(-it Lambda) V^dagger`.
pub fn exact_evolution(spec: &SpectralDecomposition, t: f64) -> ComplexMatrix {
    spec.apply_function(|l| Complex64::from_polar(1.0, -t * l))
}
