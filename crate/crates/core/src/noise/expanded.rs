use num_complex::Complex64;

use crate::circuit::sim::{apply_pauli, compile, zero_state, Op};
use crate::circuit::CircuitSpec;
use crate::mqsvt::{MqsvtInstance, MqsvtStep};
use crate::numerics::check_dim;
use crate::{Error, Result};

/// A flat gate list, each entry one noise location.
#[derive(Clone, Debug)]
pub struct ExpandedCircuit {
    n_qubits: usize,
    pub(crate) ops: Vec<Op>,
}

impl ExpandedCircuit {
    pub fn from_circuit(c: &CircuitSpec) -> Result<Self> {
        check_dim(1usize << c.n)?;
        Ok(Self {
            n_qubits: c.n,
            ops: compile(c),
        })
    }

    /// The mQSVT circuit with `U_A` and `U_A^dagger` unrolled into gates and
    /// each ancilla rotation kept as a one-qubit gate. The first rotation
    /// (a global phase on the all-zero input) is dropped.
    pub fn from_mqsvt(inst: &MqsvtInstance) -> Result<Self> {
        let c = inst
            .circuit
            .as_ref()
            .ok_or_else(|| Error::invalid("noisy simulation needs the gate list of U_A"))?;
        if c.n != inst.n + 1 {
            return Err(Error::invalid("U_A circuit width does not match the instance"));
        }
        let forward = compile(c);
        let backward: Vec<Op> = forward.iter().rev().map(Op::adjoint).collect();
        let mut ops = Vec::new();
        for step in inst.steps(false) {
            match step {
                MqsvtStep::Rotation(phi) => ops.push(Op::Diag {
                    d0: Complex64::from_polar(1.0, phi),
                    d1: Complex64::from_polar(1.0, -phi),
                    q: 0,
                }),
                MqsvtStep::Query => ops.extend(forward.iter().cloned()),
                MqsvtStep::QueryAdjoint => ops.extend(backward.iter().cloned()),
            }
        }
        Ok(Self { n_qubits: c.n, ops })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn one_qubit_count(&self) -> usize {
        self.ops.iter().filter(|o| !o.is_two_qubit()).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.ops.iter().filter(|o| o.is_two_qubit()).count()
    }

    /// Noiseless output on `|0...0>`.
    pub fn final_state(&self) -> Vec<Complex64> {
        let mut s = zero_state(self.n_qubits);
        for op in &self.ops {
            op.apply(&mut s, self.n_qubits);
        }
        s
    }
}

/// Non-identity Paulis a depolarizing error can pick on this op's operands.
pub(crate) fn pauli_choices(op: &Op) -> u8 {
    if op.is_two_qubit() {
        15
    } else {
        3
    }
}

/// Apply error `code` (1-based) after `op`. For two-qubit ops the code packs
/// the Pauli on the first operand in the high two bits.
pub(crate) fn apply_error(op: &Op, code: u8, s: &mut [Complex64], n: usize) {
    let (q0, q1) = op.qubits();
    if op.is_two_qubit() {
        apply_pauli(s, n, q0, code >> 2);
        apply_pauli(s, n, q1, code & 3);
    } else {
        apply_pauli(s, n, q0, code);
    }
}
