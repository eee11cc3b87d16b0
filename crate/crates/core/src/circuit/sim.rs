use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gates::{adjoint2, adjoint4, Gate, M2, M4};
use super::rqc::CircuitSpec;
use crate::numerics::{check_dim, ComplexMatrix};
use crate::Result;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A gate lowered to the form the statevector kernels consume.
#[derive(Clone, Debug)]
pub(crate) enum Op {
    One { m: M2, q: usize },
    Diag { d0: Complex64, d1: Complex64, q: usize },
    Cx { c: usize, t: usize },
    Two { m: M4, q0: usize, q1: usize },
}

impl Op {
    pub(crate) fn from_gate(g: &Gate) -> Op {
        match *g {
            Gate::U1 { q, .. } | Gate::ZPhase { q, .. } => {
                let m = g.matrix1().expect("one-qubit gate");
                Op::Diag { d0: m[0][0], d1: m[1][1], q }
            }
            Gate::U2 { q, .. } | Gate::U3 { q, .. } => Op::One { m: g.matrix1().expect("one-qubit gate"), q },
            Gate::Cx { control, target } => Op::Cx { c: control, t: target },
            Gate::Su4 { ref m, q0, q1 } => Op::Two { m: **m, q0, q1 },
        }
    }

    pub(crate) fn adjoint(&self) -> Op {
        match *self {
            Op::One { ref m, q } => Op::One { m: adjoint2(m), q },
            Op::Diag { d0, d1, q } => Op::Diag { d0: d0.conj(), d1: d1.conj(), q },
            Op::Cx { c, t } => Op::Cx { c, t },
            Op::Two { ref m, q0, q1 } => Op::Two { m: adjoint4(m), q0, q1 },
        }
    }

    pub(crate) fn is_two_qubit(&self) -> bool {
        matches!(self, Op::Cx { .. } | Op::Two { .. })
    }

    /// Operand qubits; the second is `usize::MAX` for one-qubit ops.
    pub(crate) fn qubits(&self) -> (usize, usize) {
        match *self {
            Op::One { q, .. } | Op::Diag { q, .. } => (q, usize::MAX),
            Op::Cx { c, t } => (c, t),
            Op::Two { q0, q1, .. } => (q0, q1),
        }
    }

    pub(crate) fn apply(&self, s: &mut [Complex64], n: usize) {
        match *self {
            Op::One { ref m, q } => apply_one(s, n, q, m),
            Op::Diag { d0, d1, q } => apply_diag(s, n, q, d0, d1),
            Op::Cx { c, t } => apply_cx(s, n, c, t),
            Op::Two { ref m, q0, q1 } => apply_two(s, n, q0, q1, m),
        }
    }
}

#[inline]
fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

pub(crate) fn apply_one(s: &mut [Complex64], n: usize, q: usize, m: &M2) {
    let stride = bit(n, q);
    let dim = s.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            let a = s[i];
            let b = s[i + stride];
            s[i] = m[0][0] * a + m[0][1] * b;
            s[i + stride] = m[1][0] * a + m[1][1] * b;
        }
        base += 2 * stride;
    }
}

pub(crate) fn apply_diag(s: &mut [Complex64], n: usize, q: usize, d0: Complex64, d1: Complex64) {
    let stride = bit(n, q);
    let dim = s.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            s[i] *= d0;
            s[i + stride] *= d1;
        }
        base += 2 * stride;
    }
}

pub(crate) fn apply_cx(s: &mut [Complex64], n: usize, c: usize, t: usize) {
    let bc = bit(n, c);
    let bt = bit(n, t);
    for i in 0..s.len() {
        if i & bc != 0 && i & bt == 0 {
            s.swap(i, i | bt);
        }
    }
}

pub(crate) fn apply_two(s: &mut [Complex64], n: usize, q0: usize, q1: usize, m: &M4) {
    let b0 = bit(n, q0);
    let b1 = bit(n, q1);
    for i in 0..s.len() {
        if i & (b0 | b1) != 0 {
            continue;
        }
        let idx = [i, i | b1, i | b0, i | b0 | b1];
        let v = [s[idx[0]], s[idx[1]], s[idx[2]], s[idx[3]]];
        for r in 0..4 {
            s[idx[r]] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
    }
}

/// Pauli `p` (1 = X, 2 = Y, 3 = Z) on qubit `q`.
pub(crate) fn apply_pauli(s: &mut [Complex64], n: usize, q: usize, p: u8) {
    let stride = bit(n, q);
    let i_unit = Complex64::new(0.0, 1.0);
    for i in 0..s.len() {
        if i & stride != 0 {
            continue;
        }
        let j = i | stride;
        match p {
            1 => s.swap(i, j),
            2 => {
                let (a, b) = (s[i], s[j]);
                s[i] = -i_unit * b;
                s[j] = i_unit * a;
            }
            3 => s[j] = -s[j],
            _ => {}
        }
    }
}

pub(crate) fn compile(c: &CircuitSpec) -> Vec<Op> {
    c.gates().map(Op::from_gate).collect()
}

/// `|0...0>` on `n` qubits.
pub fn zero_state(n: usize) -> Vec<Complex64> {
    let mut s = vec![ZERO; 1 << n];
    s[0] = Complex64::new(1.0, 0.0);
    s
}

pub fn apply_circuit(c: &CircuitSpec, state: &mut [Complex64]) -> Result<()> {
    if state.len() != 1 << c.n {
        return Err(crate::Error::invalid("state length does not match the circuit width"));
    }
    for g in c.gates() {
        Op::from_gate(g).apply(state, c.n);
    }
    Ok(())
}

/// Dense unitary of the circuit, built column by column.
pub fn circuit_unitary(c: &CircuitSpec) -> Result<ComplexMatrix> {
    let dim = 1usize << c.n;
    check_dim(dim)?;
    let ops = compile(c);
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for col in u.as_mut_slice().chunks_mut(dim) {
        for op in &ops {
            op.apply(col, c.n);
        }
    }
    Ok(u)
}
