use super::eval::sup_error;
use super::phases::{Convention, PhaseFactorSequence};
use crate::{Error, Result};

/// Repeat a QSP sequence `r` times, merging the seam phases, so that the
/// result approximates `exp(-i r t x^2)`.
///
/// `(phi_0..phi_{d-1}, [phi_d + phi_0, phi_1..phi_{d-1}] x (r-1), phi_d)`.
/// The error of the result grows at most like `r^2` times the input error.
pub fn concatenate(seq: &PhaseFactorSequence, r: usize) -> Result<PhaseFactorSequence> {
    if r == 0 {
        return Err(Error::invalid("repetition count must be at least 1"));
    }
    let qsp = seq.to_convention(Convention::Qsp)?;
    let phi = &qsp.phases;
    let d = phi.len() - 1;
    if d == 0 {
        return Err(Error::invalid("cannot concatenate a degree-0 sequence"));
    }
    let mut out = Vec::with_capacity(r * d + 1);
    out.extend_from_slice(&phi[..d]);
    for _ in 1..r {
        out.push(phi[d] + phi[0]);
        out.extend_from_slice(&phi[1..d]);
    }
    out.push(phi[d]);
    let t = qsp.t * r as f64;
    let mut result = PhaseFactorSequence::new(t, Convention::Qsp, out)?;
    result.sup_error = sup_error(&result.phases, t);
    result.solver = qsp.solver.clone();
    Ok(result)
}
