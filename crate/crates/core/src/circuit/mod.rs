//! Coupling maps, random circuit generators and a dense statevector simulator.
//!
//! Qubit 0 is the most significant bit of a basis index, so on `n` qubits
//! qubit `q` owns bit `n - 1 - q`.

mod coupling;
mod gates;
mod io;
mod qv;
mod rqc;
pub(crate) mod sim;
mod stats;

pub use coupling::{make_coupling, CouplingKind, CouplingMap};
pub use gates::{rx_half_pi, rz, Gate, M2, M4};
pub use io::{read_circuit, write_circuit};
pub use qv::generate_qv;
pub use rqc::{generate_rqc, layers_to_g1, CircuitSpec};
pub use sim::{apply_circuit, circuit_unitary, zero_state};
pub use stats::{column_probabilities, column_stats, haar_reference, sample_column_stats, ColumnStats, HaarReference};
