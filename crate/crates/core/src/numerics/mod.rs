//! Dense complex linear algebra helpers and reproducible randomness.

mod haar;
mod rng;
mod spectral;

pub use haar::{haar_isometry, haar_unitary};
pub use rng::RandomSource;
pub use spectral::{block_and_spectrum, hermitian_eigen, SpectralDecomposition};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type ComplexMatrix = DMatrix<Complex64>;

/// Largest matrix dimension accepted by the dense routines (13 qubits).
pub const MAX_DENSE_DIM: usize = 1 << 13;

/// `||U^dagger U - I||_max`.
pub fn unitarity_error(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    let g = u.adjoint() * u;
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let e = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            worst = worst.max((g[(i, j)] - e).norm());
        }
    }
    worst
}

/// Spectral norm via the singular values.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0f64, |acc, s| acc.max(*s))
}

pub(crate) fn check_dim(dim: usize) -> crate::Result<()> {
    if dim == 0 {
        return Err(crate::Error::invalid("matrix dimension must be positive"));
    }
    if dim > MAX_DENSE_DIM {
        return Err(crate::Error::Capacity(format!(
            "dimension {dim} exceeds dense limit {MAX_DENSE_DIM}"
        )));
    }
    Ok(())
}
