use super::coupling::{make_coupling, CouplingKind};
use super::gates::{Gate, M4};
use super::rqc::CircuitSpec;
use crate::numerics::{haar_unitary, RandomSource};
use crate::{Error, Result};

/// Quantum-volume style circuit: each layer pairs up a random permutation of
/// the qubits and applies a Haar-random two-qubit unitary to every pair.
pub fn generate_qv(n: usize, layers: usize, rng: &mut RandomSource) -> Result<CircuitSpec> {
    if n < 2 {
        return Err(Error::invalid("quantum-volume circuits need at least two qubits"));
    }
    if layers == 0 {
        return Err(Error::invalid("quantum-volume circuits need at least one layer"));
    }
    let coupling = make_coupling(CouplingKind::Full, n)?;
    let mut out = Vec::with_capacity(layers);
    for _ in 0..layers {
        let mut perm: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut perm);
        let mut layer = Vec::with_capacity(n / 2);
        for pair in perm.chunks_exact(2) {
            let u = haar_unitary(4, rng)?;
            let mut m: M4 = Default::default();
            for (i, row) in m.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = u[(i, j)];
                }
            }
            layer.push(Gate::Su4 { m: Box::new(m), q0: pair[0], q1: pair[1] });
        }
        out.push(layer);
    }
    Ok(CircuitSpec { n, coupling, layers: out })
}
