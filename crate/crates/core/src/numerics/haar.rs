use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::{check_dim, ComplexMatrix, RandomSource};
use crate::Result;

/// Haar-random unitary of size `dim` (QR of a Ginibre matrix with the
/// diagonal phases of `R` moved into `Q`).
pub fn haar_unitary(dim: usize, rng: &mut RandomSource) -> Result<ComplexMatrix> {
    haar_isometry(dim, dim, rng)
}

/// First `cols` columns of a Haar-random unitary of size `rows`.
pub fn haar_isometry(rows: usize, cols: usize, rng: &mut RandomSource) -> Result<ComplexMatrix> {
    check_dim(rows)?;
    if cols == 0 || cols > rows {
        return Err(crate::Error::invalid(format!(
            "isometry needs 0 < cols <= rows, got {cols} x {rows}"
        )));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { Complex64::new(1.0, 0.0) };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}
