use std::f64::consts::TAU;

use super::coupling::CouplingMap;
use super::gates::Gate;
use crate::numerics::RandomSource;
use crate::{Error, Result};

/// A layered circuit on `n` qubits. Gates within a layer act on disjoint qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec {
    pub n: usize,
    pub coupling: CouplingMap,
    pub layers: Vec<Vec<Gate>>,
}

impl CircuitSpec {
    pub fn gates(&self) -> impl Iterator<Item = &Gate> + '_ {
        self.layers.iter().flatten()
    }

    pub fn one_qubit_count(&self) -> usize {
        self.gates().filter(|g| !g.is_two_qubit()).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates().filter(|g| g.is_two_qubit()).count()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

/// One-qubit gate count for `layers` layers at one-qubit density 1/2.
pub fn layers_to_g1(layers: usize, n: usize) -> usize {
    layers * n / 2
}

fn random_one_qubit(q: usize, rng: &mut RandomSource) -> Gate {
    let kind = rng.below(3);
    let mut angle = || TAU * rng.uniform();
    match kind {
        0 => Gate::U1 { lambda: angle(), q },
        1 => {
            let (phi, lambda) = (angle(), angle());
            Gate::U2 { phi, lambda, q }
        }
        _ => {
            let (theta, phi, lambda) = (angle(), angle(), angle());
            Gate::U3 { theta, phi, lambda, q }
        }
    }
}

fn oriented(edge: (usize, usize), rng: &mut RandomSource) -> Gate {
    let (a, b) = if rng.below(2) == 0 { edge } else { (edge.1, edge.0) };
    Gate::Cx { control: a, target: b }
}

/// Random circuit respecting a coupling map.
///
/// `g2 = ceil((1-p1)/(2 p1) g1)` CNOTs and at most `y2 = ceil((1-p1)/2 n)`
/// per layer. Each layer takes a uniformly random maximal set of disjoint
/// edges not used in the previous layer (capped by `y2` and the remaining
/// budget) and fills the other qubits with random U1/U2/U3 gates. Leftover
/// one-qubit gates or CNOTs are appended in trailing layers.
pub fn generate_rqc(coupling: &CouplingMap, g1: usize, p1: f64, rng: &mut RandomSource) -> Result<CircuitSpec> {
    if !(p1 > 0.0 && p1 <= 1.0) {
        return Err(Error::invalid(format!("one-qubit density must lie in (0, 1], got {p1}")));
    }
    let n = coupling.n;
    let g2 = ((1.0 - p1) / (2.0 * p1) * g1 as f64 - 1e-9).ceil().max(0.0) as usize;
    let y2 = ((1.0 - p1) / 2.0 * n as f64 - 1e-9).ceil().max(0.0) as usize;
    if g2 > 0 && coupling.edges.is_empty() {
        return Err(Error::invalid("coupling map has no edges but CNOTs were requested"));
    }
    if g2 > 0 && y2 == 0 {
        return Err(Error::invalid("no CNOTs fit in a layer"));
    }

    let mut layers: Vec<Vec<Gate>> = Vec::new();
    let (mut m1, mut m2) = (0usize, 0usize);
    let mut previous: Vec<(usize, usize)> = Vec::new();
    while m1 < g1 && m2 < g2 {
        let cap = y2.min(g2 - m2);
        let mut candidates: Vec<(usize, usize)> =
            coupling.edges.iter().copied().filter(|e| !previous.contains(e)).collect();
        rng.shuffle(&mut candidates);
        let mut busy = vec![false; n];
        let mut chosen = Vec::new();
        for e in candidates {
            if chosen.len() == cap {
                break;
            }
            if !busy[e.0] && !busy[e.1] {
                busy[e.0] = true;
                busy[e.1] = true;
                chosen.push(e);
            }
        }
        let mut free: Vec<usize> = (0..n).filter(|&q| !busy[q]).collect();
        let x1 = free.len().min(g1 - m1);
        rng.shuffle(&mut free);
        free.truncate(x1);
        free.sort_unstable();
        if chosen.is_empty() && free.is_empty() {
            break;
        }
        let mut layer: Vec<Gate> = chosen.iter().map(|&e| oriented(e, rng)).collect();
        layer.extend(free.iter().map(|&q| random_one_qubit(q, rng)));
        m1 += x1;
        m2 += chosen.len();
        previous = chosen;
        layers.push(layer);
    }
    if m1 < g1 {
        while m1 < g1 {
            let mut qubits: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut qubits);
            qubits.truncate((g1 - m1).min(n));
            qubits.sort_unstable();
            m1 += qubits.len();
            layers.push(qubits.into_iter().map(|q| random_one_qubit(q, rng)).collect());
        }
    } else {
        while m2 < g2 {
            let options: Vec<(usize, usize)> =
                coupling.edges.iter().copied().filter(|e| !previous.contains(e)).collect();
            let pool = if options.is_empty() { &coupling.edges } else { &options };
            let e = pool[rng.below(pool.len())];
            layers.push(vec![oriented(e, rng)]);
            previous = vec![e];
            m2 += 1;
        }
    }
    Ok(CircuitSpec {
        n,
        coupling: coupling.clone(),
        layers,
    })
}
