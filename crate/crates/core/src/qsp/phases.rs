use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How a phase list is meant to be consumed.
///
/// `Qsp` phases enter the QSP product directly. `Circuit` phases are the
/// ancilla Z-rotation angles of the alternating `U_A`/`U_A^dagger` circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Qsp,
    Circuit,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverMeta {
    pub seed: u64,
    pub iterations: usize,
    #[serde(default)]
    pub restarts: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFactorSequence {
    pub t: f64,
    pub convention: Convention,
    pub phases: Vec<f64>,
    /// Certified `max |P(x) - exp(-itx^2)|` on `[0, 1]`; NaN when unknown.
    pub sup_error: f64,
    pub solver: SolverMeta,
}

impl PhaseFactorSequence {
    pub fn new(t: f64, convention: Convention, phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::invalid("phase sequence is empty"));
        }
        if !t.is_finite() || phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("phase sequence contains non-finite values"));
        }
        Ok(Self {
            t,
            convention,
            phases,
            sup_error: f64::NAN,
            solver: SolverMeta::default(),
        })
    }

    /// Polynomial degree, one less than the number of phases.
    pub fn degree(&self) -> usize {
        self.phases.len() - 1
    }

    /// Number of `U_A` plus `U_A^dagger` applications in the circuit is the
    /// degree; this is the number of each.
    pub fn queries(&self) -> usize {
        self.degree() / 2
    }

    pub fn to_convention(&self, to: Convention) -> Result<Self> {
        convert_convention(self, to)
    }

    /// Phases in the QSP convention, converting if needed.
    pub fn qsp_phases(&self) -> Result<Vec<f64>> {
        Ok(self.to_convention(Convention::Qsp)?.phases)
    }

    /// Phase file text: JSON with every float written to 17 significant digits.
    pub fn to_json(&self) -> Result<String> {
        let num = |x: f64| -> Result<String> {
            if x.is_finite() {
                Ok(format!("{x:.16e}"))
            } else {
                Err(Error::invalid("cannot serialise non-finite value"))
            }
        };
        let conv = match self.convention {
            Convention::Qsp => "qsp",
            Convention::Circuit => "circuit",
        };
        let phases: Vec<String> = self.phases.iter().map(|&p| num(p)).collect::<Result<_>>()?;
        let sup = if self.sup_error.is_nan() { "null".to_string() } else { num(self.sup_error)? };
        Ok(format!(
            "{{\n  \"t\": {},\n  \"d\": {},\n  \"convention\": \"{}\",\n  \"phases\": [\n    {}\n  ],\n  \"sup_error\": {},\n  \"solver_meta\": {{ \"seed\": {}, \"iterations\": {}, \"restarts\": {} }}\n}}\n",
            num(self.t)?,
            self.degree(),
            conv,
            phases.join(",\n    "),
            sup,
            self.solver.seed,
            self.solver.iterations,
            self.solver.restarts,
        ))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            t: f64,
            d: usize,
            convention: Convention,
            phases: Vec<f64>,
            sup_error: Option<f64>,
            #[serde(default)]
            solver_meta: SolverMeta,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.phases.len() != raw.d + 1 {
            return Err(Error::Parse(format!(
                "d = {} but {} phases were given",
                raw.d,
                raw.phases.len()
            )));
        }
        let mut seq = Self::new(raw.t, raw.convention, raw.phases)?;
        seq.sup_error = raw.sup_error.unwrap_or(f64::NAN);
        seq.solver = raw.solver_meta;
        Ok(seq)
    }
}

fn shift(i: usize, d: usize) -> f64 {
    if i == 0 || i == d {
        FRAC_PI_4
    } else {
        FRAC_PI_2
    }
}

/// Reduce an angle to `[-pi, pi)`.
pub fn wrap_phase(p: f64) -> f64 {
    let w = (p + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Map between QSP and circuit phases: `+pi/4` on both ends and `+pi/2` in the
/// interior going to the circuit convention, the inverse going back.
///
/// With these phases the circuit's top-left block is `(-1)^(d/2) P(sqrt(H))` for degree `d`;
/// the sign is a global phase and is removed in
/// [`crate::mqsvt::MqsvtInstance::encoded_block`].
pub fn convert_convention(seq: &PhaseFactorSequence, to: Convention) -> Result<PhaseFactorSequence> {
    if seq.convention == to {
        return Ok(seq.clone());
    }
    let d = seq.degree();
    if d == 0 {
        return Err(Error::invalid("conversion needs at least two phases"));
    }
    let sign = if to == Convention::Circuit { 1.0 } else { -1.0 };
    let phases = seq
        .phases
        .iter()
        .enumerate()
        .map(|(i, &p)| wrap_phase(p + sign * shift(i, d)))
        .collect();
    Ok(PhaseFactorSequence {
        convention: to,
        phases,
        ..seq.clone()
    })
}
