//! Semi-analytic statistics of the block-encoded Haar ensemble.
//!
//! `H_l(t)` is the expectation of `prod_{j<=l} f(lambda_j) prod_{j>l} conj f(lambda_j)`
//! over `2l` distinct eigenvalues of `H = A^dagger A`, with `f(x) = exp(-itx)`.
//! The eigenvalues form a determinantal process with a shifted-Legendre
//! kernel, so `H_l` reduces to traces of banded matrices built from the
//! Legendre coefficients of `f` and the triple-product tensor `F`.

mod critical;
mod kernel;
mod legendre;
mod moments;
mod montecarlo;
mod special;
mod triple;

pub use critical::{critical_point, critical_times, uniform_grid, CriticalPoint, CriticalTimes, MAX_GRID_STEP};
pub use kernel::{expected_bitstring_moments, h_moment, Banded, EigenKernelMatrix, DEFAULT_COEFF_TOL};
pub use legendre::{legendre_coeffs, LegendreCoeffs};
pub use moments::HMoments;
pub use montecarlo::{
    arcsine_cdf, diag_evolution_mc, first_entry_beta_ks, ks_statistic, level_density_check, mc_h_oracle,
    DiagEvolutionPoint, LevelDensityCheck,
};
pub use special::{bessel_j0, bessel_t_opt, gauss_legendre, j0_first_root, legendre_values, mean_diag_evolution};
pub use triple::{f_triple, triangle_ok, TripleProductTensor};
