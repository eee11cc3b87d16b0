//! Quantum signal processing for `exp(-i t x^2)`.
//!
//! The QSP unitary is `e^{i phi_0 Z} prod_j W(x) e^{i phi_j Z}` with
//! `W(x) = [[x, i sqrt(1-x^2)], [i sqrt(1-x^2), x]]`; its top-left entry is
//! the polynomial `P(x)`.

mod concat;
mod eval;
mod objective;
mod phases;
mod solver;

pub use concat::concatenate;
pub use eval::{qsp_eval, qsp_matrix, sup_error, target, QspPointValue};
pub use objective::QspObjective;
pub use phases::{convert_convention, wrap_phase, Convention, PhaseFactorSequence, SolverMeta};
pub use solver::{refine_phases, solve_phases, SolveOptions};
