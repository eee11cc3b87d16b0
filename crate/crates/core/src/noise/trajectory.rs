//! Pauli-trajectory sampling.
//!
//! Most shots of a low-noise circuit see no error at all, and those are drawn
//! straight from the noiseless distribution. For the rest, the state is
//! resumed from a checkpoint before the first error and moved between
//! errors gate by gate inside a block and by dense suffix matrices across
//! blocks. With `T_b` the product of all gates from block boundary `b` to
//! the end, the segment from `b` to `c` is `T_c^dagger T_b`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::expanded::{apply_error, pauli_choices, ExpandedCircuit};
use super::{Histogram, NoiseModel};
use crate::numerics::RandomSource;
use crate::{Error, Result};

/// Memory allowed for the suffix matrices of one circuit.
const SUFFIX_BUDGET_BYTES: usize = 256 << 20;
const SHOTS_PER_CHUNK: u64 = 1 << 13;

/// A circuit prepared for repeated noisy sampling. Preparation does not
/// depend on the noise rates, so one simulator serves a whole rate sweep.
pub struct TrajectorySimulator<'a> {
    circuit: &'a ExpandedCircuit,
    block: usize,
    /// State before op `b * block`, for every block.
    checkpoints: Vec<DVector<Complex64>>,
    /// `T_b^dagger` for every block, when they fit in memory.
    suffix_adj: Option<Vec<DMatrix<Complex64>>>,
    ideal_cdf: Vec<f64>,
}

impl<'a> TrajectorySimulator<'a> {
    pub fn new(circuit: &'a ExpandedCircuit) -> Self {
        let n = circuit.n_qubits();
        let dim = circuit.dim();
        let len = circuit.len();
        let matrix_bytes = dim * dim * std::mem::size_of::<Complex64>();
        let max_blocks = SUFFIX_BUDGET_BYTES / matrix_bytes;
        let use_suffix = max_blocks >= 2 && len > 0;
        let mut block = 32.max(dim / 4);
        if use_suffix {
            block = block.max(len.div_ceil(max_blocks));
        }
        let blocks = len.div_ceil(block).max(1);

        let mut state = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        state[0] = Complex64::new(1.0, 0.0);
        let mut checkpoints = Vec::with_capacity(blocks);
        for b in 0..blocks {
            checkpoints.push(state.clone());
            for op in &circuit.ops[b * block..((b + 1) * block).min(len)] {
                op.apply(state.as_mut_slice(), n);
            }
        }
        let total: f64 = state.iter().map(|a| a.norm_sqr()).sum();
        let mut acc = 0.0;
        let ideal_cdf = state
            .iter()
            .map(|a| {
                acc += a.norm_sqr() / total;
                acc
            })
            .collect();

        let suffix_adj = use_suffix.then(|| {
            let mut mats = vec![DMatrix::<Complex64>::identity(dim, dim); blocks];
            let mut m = DMatrix::<Complex64>::identity(dim, dim);
            for b in (0..blocks).rev() {
                // T_b^dagger = G_{bB}^dagger ... G_{(b+1)B-1}^dagger T_{b+1}^dagger
                for op in circuit.ops[b * block..((b + 1) * block).min(len)].iter().rev() {
                    let adj = op.adjoint();
                    for col in m.as_mut_slice().chunks_mut(dim) {
                        adj.apply(col, n);
                    }
                }
                mats[b] = m.clone();
            }
            mats
        });

        Self {
            circuit,
            block,
            checkpoints,
            suffix_adj,
            ideal_cdf,
        }
    }

    pub fn circuit(&self) -> &ExpandedCircuit {
        self.circuit
    }

    /// Noiseless output probabilities.
    pub fn ideal_probabilities(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.ideal_cdf
            .iter()
            .map(|&c| {
                let p = c - prev;
                prev = c;
                p
            })
            .collect()
    }

    /// `shots` trajectories, one measurement each. Shots are split into
    /// fixed chunks keyed by index, so the histogram does not depend on the
    /// thread count.
    pub fn sample(&self, noise: &NoiseModel, shots: u64, rng: &RandomSource) -> Result<Histogram> {
        if shots == 0 {
            return Err(Error::invalid("need at least one shot"));
        }
        let dim = self.circuit.dim();
        let chunks = shots.div_ceil(SHOTS_PER_CHUNK);
        let counts = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let todo = SHOTS_PER_CHUNK.min(shots - c * SHOTS_PER_CHUNK);
                self.sample_chunk(noise, todo, rng.split(c))
            })
            .reduce(
                || vec![0u64; dim],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Ok(Histogram {
            n_qubits: self.circuit.n_qubits(),
            shots,
            seed: rng.seed(),
            noise: *noise,
            counts,
        })
    }

    fn sample_chunk(&self, noise: &NoiseModel, shots: u64, mut rng: RandomSource) -> Vec<u64> {
        let dim = self.circuit.dim();
        let mut counts = vec![0u64; dim];
        let mut errors = Vec::new();
        let mut state = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        let mut tmp = state.clone();
        for _ in 0..shots {
            self.sample_errors(noise, &mut rng, &mut errors);
            let outcome = if errors.is_empty() {
                let u = rng.uniform();
                self.ideal_cdf.partition_point(|&c| c <= u).min(dim - 1)
            } else {
                self.run(&errors, &mut state, &mut tmp);
                measure(state.as_slice(), rng.uniform())
            };
            counts[outcome] += 1;
        }
        counts
    }

    /// Error locations in increasing order, by geometric skipping at the
    /// larger rate and thinning down to each gate's own rate.
    fn sample_errors(&self, noise: &NoiseModel, rng: &mut RandomSource, out: &mut Vec<(usize, u8)>) {
        out.clear();
        let rmax = noise.r1.max(noise.r2);
        if rmax == 0.0 {
            return;
        }
        let ops = &self.circuit.ops;
        let log_keep = (-rmax).ln_1p();
        let mut pos = 0usize;
        loop {
            let skip = if rmax >= 1.0 {
                0.0
            } else {
                (rng.uniform_open0().ln() / log_keep).floor()
            };
            if pos as f64 + skip >= ops.len() as f64 {
                break;
            }
            pos += skip as usize;
            let op = &ops[pos];
            let r = noise.rate(op.is_two_qubit());
            if r >= rmax || rng.uniform() * rmax < r {
                out.push((pos, 1 + rng.below(pauli_choices(op) as usize) as u8));
            }
            pos += 1;
        }
    }

    fn run(&self, errors: &[(usize, u8)], state: &mut DVector<Complex64>, tmp: &mut DVector<Complex64>) {
        let n = self.circuit.n_qubits();
        let first = errors[0].0 / self.block;
        state.copy_from(&self.checkpoints[first]);
        let mut pos = first * self.block;
        for &(at, code) in errors {
            self.advance(state, tmp, pos, at + 1);
            apply_error(&self.circuit.ops[at], code, state.as_mut_slice(), n);
            pos = at + 1;
        }
        self.finish(state, tmp, pos);
    }

    fn gates(&self, state: &mut DVector<Complex64>, from: usize, to: usize) {
        let n = self.circuit.n_qubits();
        for op in &self.circuit.ops[from..to] {
            op.apply(state.as_mut_slice(), n);
        }
    }

    /// Apply ops `from..to`.
    fn advance(&self, state: &mut DVector<Complex64>, tmp: &mut DVector<Complex64>, from: usize, to: usize) {
        let dim = self.circuit.dim();
        let (c1, c2) = (from.div_ceil(self.block), to / self.block);
        match &self.suffix_adj {
            Some(mats) if c2 > c1 && c2 < mats.len() && (c2 - c1) * self.block > 2 * dim => {
                self.gates(state, from, c1 * self.block);
                // T_{c2}^dagger T_{c1}
                mats[c1].ad_mul_to(state, tmp);
                mats[c2].mul_to(tmp, state);
                self.gates(state, c2 * self.block, to);
            }
            _ => self.gates(state, from, to),
        }
    }

    /// Apply ops `from..` to the end.
    fn finish(&self, state: &mut DVector<Complex64>, tmp: &mut DVector<Complex64>, from: usize) {
        let len = self.circuit.len();
        let dim = self.circuit.dim();
        let c1 = from.div_ceil(self.block);
        match &self.suffix_adj {
            Some(mats) if c1 < mats.len() && len - c1 * self.block > dim => {
                self.gates(state, from, c1 * self.block);
                mats[c1].ad_mul_to(state, tmp);
                std::mem::swap(state, tmp);
            }
            _ => self.gates(state, from, len),
        }
    }
}

/// Index drawn from `|state|^2` with the uniform variate `u`.
fn measure(state: &[Complex64], u: f64) -> usize {
    let total: f64 = state.iter().map(|a| a.norm_sqr()).sum();
    let target = u * total;
    let mut acc = 0.0;
    for (i, a) in state.iter().enumerate() {
        acc += a.norm_sqr();
        if acc > target {
            return i;
        }
    }
    state.len() - 1
}

/// One-off convenience around [`TrajectorySimulator`].
pub fn simulate_noisy(
    circuit: &ExpandedCircuit,
    noise: &NoiseModel,
    shots: u64,
    rng: &RandomSource,
) -> Result<Histogram> {
    TrajectorySimulator::new(circuit).sample(noise, shots, rng)
}
