use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CouplingKind {
    Linear,
    Grid { rows: usize, cols: usize },
    Full,
}

/// Undirected set of qubit pairs that admit a CNOT.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingMap {
    pub n: usize,
    pub kind: CouplingKind,
    /// Sorted pairs `(a, b)` with `a < b`.
    pub edges: Vec<(usize, usize)>,
}

impl CouplingMap {
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let w = if a == v { b } else if b == v { a } else { continue };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

pub fn make_coupling(kind: CouplingKind, n: usize) -> Result<CouplingMap> {
    if n < 2 {
        return Err(Error::invalid("coupling map needs at least two qubits"));
    }
    let mut edges = Vec::new();
    match kind {
        CouplingKind::Linear => edges.extend((1..n).map(|i| (i - 1, i))),
        CouplingKind::Grid { rows, cols } => {
            if rows * cols != n {
                return Err(Error::invalid(format!("grid {rows}x{cols} does not hold {n} qubits")));
            }
            for r in 0..rows {
                for c in 0..cols {
                    let q = r * cols + c;
                    if c + 1 < cols {
                        edges.push((q, q + 1));
                    }
                    if r + 1 < rows {
                        edges.push((q, q + cols));
                    }
                }
            }
        }
        CouplingKind::Full => {
            for a in 0..n {
                for b in a + 1..n {
                    edges.push((a, b));
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(CouplingMap { n, kind, edges })
}
