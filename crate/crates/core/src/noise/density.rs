use nalgebra::DMatrix;
use num_complex::Complex64;

use super::expanded::{apply_error, pauli_choices, ExpandedCircuit};
use super::NoiseModel;
use crate::{Error, Result};

/// Largest register the density-matrix path accepts.
pub const MAX_DENSITY_QUBITS: usize = 8;

/// Diagonal of the exact density matrix after every gate is followed by its
/// depolarizing channel `rho -> (1 - r) rho + r / m sum_P P rho P`.
pub fn exact_noisy_distribution(c: &ExpandedCircuit, noise: &NoiseModel) -> Result<Vec<f64>> {
    let n = c.n_qubits();
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::Capacity(format!(
            "density-matrix evolution is limited to {MAX_DENSITY_QUBITS} qubits, got {n}"
        )));
    }
    let dim = c.dim();
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    rho[(0, 0)] = Complex64::new(1.0, 0.0);
    for op in &c.ops {
        // rho -> G rho G^dagger as two one-sided applications.
        conjugate(&mut rho, |col| op.apply(col, n));
        let r = noise.rate(op.is_two_qubit());
        if r == 0.0 {
            continue;
        }
        let m = pauli_choices(op);
        let mut mixed = rho.scale(1.0 - r);
        for code in 1..=m {
            let mut term = rho.clone();
            conjugate(&mut term, |col| apply_error(op, code, col, n));
            mixed += term.scale(r / m as f64);
        }
        rho = mixed;
    }
    Ok((0..dim).map(|i| rho[(i, i)].re).collect())
}

/// `rho -> G rho G^dagger`, with `g` applying `G` to one column in place.
fn conjugate(rho: &mut DMatrix<Complex64>, g: impl Fn(&mut [Complex64])) {
    let dim = rho.nrows();
    for col in rho.as_mut_slice().chunks_mut(dim) {
        g(col);
    }
    rho.adjoint_mut();
    for col in rho.as_mut_slice().chunks_mut(dim) {
        g(col);
    }
    rho.adjoint_mut();
}
