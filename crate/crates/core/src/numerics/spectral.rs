use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_dim, ComplexMatrix};
use crate::{Error, Result};

/// `A` (top-left block of a unitary), `H = A^dagger A` and its eigenpairs.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub block: ComplexMatrix,
    pub hamiltonian: ComplexMatrix,
    /// Ascending, clamped to `[0, 1]`.
    pub eigenvalues: Vec<f64>,
    /// Columns are orthonormal eigenvectors matching `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// `V f(lambda) V^dagger`.
    pub fn apply_function(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.nrows();
        let mut scaled = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let fj = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        scaled * v.adjoint()
    }

    /// `||V diag(lambda) V^dagger - H||_max`.
    pub fn reconstruction_error(&self) -> f64 {
        let rebuilt = self.apply_function(|l| Complex64::new(l, 0.0));
        (rebuilt - &self.hamiltonian).iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }
}

/// Extract the top-left `2^n_sys` block of `u` and diagonalise `A^dagger A`.
pub fn block_and_spectrum(u: &ComplexMatrix, n_sys: usize) -> Result<SpectralDecomposition> {
    let n = 1usize
        .checked_shl(n_sys as u32)
        .ok_or_else(|| Error::invalid("too many system qubits"))?;
    if u.nrows() != u.ncols() || u.nrows() != 2 * n {
        return Err(Error::invalid(format!(
            "expected a {0}x{0} unitary for {n_sys} system qubits, got {1}x{2}",
            2 * n,
            u.nrows(),
            u.ncols()
        )));
    }
    let err = super::unitarity_error(u);
    if !(err <= 1e-8) {
        return Err(Error::invalid(format!("matrix is not unitary (||U^dagger U - I||_max = {err:.3e})")));
    }
    let block = u.view((0, 0), (n, n)).into_owned();
    spectrum_of_block(block)
}

pub(crate) fn spectrum_of_block(block: ComplexMatrix) -> Result<SpectralDecomposition> {
    check_dim(block.nrows())?;
    let hamiltonian = block.adjoint() * &block;
    let (eigenvalues, eigenvectors) = hermitian_eigen(&hamiltonian);
    Ok(SpectralDecomposition {
        block,
        hamiltonian,
        eigenvalues: eigenvalues.into_iter().map(|l| l.clamp(0.0, 1.0)).collect(),
        eigenvectors,
    })
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = h.clone().symmetric_eigen();
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}
