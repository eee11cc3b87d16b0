//! Hamiltonian-simulation benchmark for random block-encoded systems.
//!
//! The crate is organised bottom up:
//!
//! - [`numerics`]: seeded randomness, Haar sampling and block spectra.
//! - [`qsp`]: phase-factor evaluation, optimisation and concatenation.
//! - [`circuit`]: coupling maps, random circuits and their unitaries.
//! - [`mqsvt`]: the alternating-phase circuit that encodes `exp(-itH)`.
//! - [`noise`]: Pauli-trajectory sampling and an exact density-matrix reference.
//! - [`metrics`]: QUES/sXES fidelity estimators and the hardness criterion.
//! - [`analytics`]: Haar-averaged spectral moments and related special functions.

pub mod analytics;
pub mod circuit;
pub mod error;
pub mod metrics;
pub mod mqsvt;
pub mod noise;
pub mod numerics;
pub mod qsp;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::{ComplexMatrix, RandomSource};
