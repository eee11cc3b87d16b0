use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use super::coupling::{make_coupling, CouplingKind};
use super::gates::{Gate, M4};
use super::rqc::CircuitSpec;
use crate::{Error, Result};

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Circuit file text. Angles carry 17 significant digits; each gate records
/// its layer so the layering survives a round trip.
pub fn write_circuit(c: &CircuitSpec) -> String {
    let coupling = serde_json::to_string(&c.coupling.kind).expect("plain enum");
    let edges: Vec<String> = c.coupling.edges.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
    let mut gates = Vec::new();
    for (layer, gs) in c.layers.iter().enumerate() {
        for g in gs {
            let params: Vec<String> = g.params().into_iter().map(num).collect();
            let ops: Vec<String> = g.operands().iter().map(|q| q.to_string()).collect();
            gates.push(format!(
                "    {{\"kind\": \"{}\", \"params\": [{}], \"operands\": [{}], \"layer\": {layer}}}",
                g.kind(),
                params.join(", "),
                ops.join(", ")
            ));
        }
    }
    format!(
        "{{\n  \"n\": {},\n  \"coupling\": {coupling},\n  \"edges\": [{}],\n  \"g1\": {},\n  \"g2\": {},\n  \"gates\": [\n{}\n  ]\n}}\n",
        c.n,
        edges.join(", "),
        c.one_qubit_count(),
        c.two_qubit_count(),
        gates.join(",\n")
    )
}

#[derive(Deserialize)]
struct RawGate {
    kind: String,
    params: Vec<f64>,
    operands: Vec<usize>,
    layer: usize,
}

#[derive(Deserialize)]
struct RawCircuit {
    n: usize,
    coupling: Value,
    g1: usize,
    g2: usize,
    gates: Vec<RawGate>,
}

pub fn read_circuit(text: &str) -> Result<CircuitSpec> {
    let raw: RawCircuit = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let kind: CouplingKind = serde_json::from_value(raw.coupling).map_err(|e| Error::Parse(e.to_string()))?;
    let coupling = make_coupling(kind, raw.n)?;
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for g in raw.gates {
        if g.operands.iter().any(|&q| q >= raw.n) {
            return Err(Error::Parse(format!("operand out of range in {} gate", g.kind)));
        }
        let want = match g.kind.as_str() {
            "u1" | "zphase" => (1, 1),
            "u2" => (2, 1),
            "u3" => (3, 1),
            "cx" => (0, 2),
            "su4" => (32, 2),
            other => return Err(Error::Parse(format!("unknown gate kind {other}"))),
        };
        if (g.params.len(), g.operands.len()) != want {
            return Err(Error::Parse(format!("malformed {} gate", g.kind)));
        }
        let (p, o) = (&g.params, &g.operands);
        let gate = match g.kind.as_str() {
            "u1" => Gate::U1 { lambda: p[0], q: o[0] },
            "zphase" => Gate::ZPhase { phi: p[0], q: o[0] },
            "u2" => Gate::U2 { phi: p[0], lambda: p[1], q: o[0] },
            "u3" => Gate::U3 { theta: p[0], phi: p[1], lambda: p[2], q: o[0] },
            "cx" => {
                if !coupling.has_edge(o[0], o[1]) || o[0] == o[1] {
                    return Err(Error::Parse(format!("cx on ({}, {}) is not a coupling edge", o[0], o[1])));
                }
                Gate::Cx { control: o[0], target: o[1] }
            }
            _ => {
                let mut m: M4 = Default::default();
                for (k, v) in m.iter_mut().flatten().enumerate() {
                    *v = Complex64::new(p[2 * k], p[2 * k + 1]);
                }
                Gate::Su4 { m: Box::new(m), q0: o[0], q1: o[1] }
            }
        };
        if g.layer >= layers.len() {
            if g.layer != layers.len() {
                return Err(Error::Parse("layers must be listed in order".into()));
            }
            layers.push(Vec::new());
        }
        layers[g.layer].push(gate);
    }
    let c = CircuitSpec { n: raw.n, coupling, layers };
    if c.one_qubit_count() != raw.g1 || c.two_qubit_count() != raw.g2 {
        return Err(Error::Parse(format!(
            "gate counts ({}, {}) disagree with header ({}, {})",
            c.one_qubit_count(),
            c.two_qubit_count(),
            raw.g1,
            raw.g2
        )));
    }
    Ok(c)
}
