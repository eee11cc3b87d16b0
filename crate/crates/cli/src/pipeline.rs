//! The noisy fidelity sweep shared by the `ques` and `benchmark` commands.
//!
//! Instance `k` draws its circuit from `split(k)` of the run seed and its
//! shots from children of that stream keyed by degree and rate, so every
//! number is fixed by the seed alone.

use serde::Serialize;

use hsbench_core::analytics::HMoments;
use hsbench_core::circuit::{generate_rqc, layers_to_g1, make_coupling, CouplingKind};
use hsbench_core::metrics::{
    alpha_from_ques, alpha_from_sxes, alpha_from_sxes_paired, bootstrap_ci95, histogram_sxes, mean_and_se, ques,
    FidelityBounds, QuesReport, SxesDenominator, SxesEstimate,
};
use hsbench_core::mqsvt::MqsvtInstance;
use hsbench_core::noise::{alpha_ref, ExpandedCircuit, NoiseModel, TrajectorySimulator};
use hsbench_core::numerics::MAX_DENSE_DIM;
use hsbench_core::qsp::{solve_phases, sup_error, Convention, PhaseFactorSequence, SolveOptions};
use hsbench_core::{Error, RandomSource, Result};

const BOOTSTRAP_RESAMPLES: usize = 2000;

/// Phases for `exp(-itx^2)` at `degree`. With a tolerance the solve must
/// reach it; without one the best sequence found in `max_restarts` restarts
/// is used and its error is reported through `sup_error`.
pub fn phases_for(t: f64, degree: usize, tol: Option<f64>, max_restarts: usize, seed: u64) -> Result<PhaseFactorSequence> {
    let opts = SolveOptions {
        tol: tol.unwrap_or(1e-12),
        max_restarts,
        seed,
        ..Default::default()
    };
    match solve_phases(t, degree, &opts) {
        Err(Error::NoConvergence { best_phases, .. }) if tol.is_none() => {
            let mut seq = PhaseFactorSequence::new(t, Convention::Qsp, best_phases)?;
            seq.sup_error = sup_error(&seq.phases, t);
            Ok(seq)
        }
        other => other,
    }
}

/// Most square `rows x cols` factorisation of `n`.
pub fn square_grid(n: usize) -> CouplingKind {
    let rows = (1..=n).filter(|r| n % r == 0 && r * r <= n).max().unwrap_or(1);
    CouplingKind::Grid { rows, cols: n / rows }
}

#[derive(Clone, Debug)]
pub struct FidelitySweep {
    /// System qubits; circuits act on `n + 1`.
    pub n: usize,
    pub t: f64,
    /// Polynomial degrees `2d`.
    pub degrees: Vec<usize>,
    pub r2: Vec<f64>,
    pub coupling: CouplingKind,
    /// Layers of the `U_A` circuit.
    pub depth: usize,
    pub instances: usize,
    pub shots: u64,
    pub seed: u64,
    pub phase_tol: Option<f64>,
    pub max_restarts: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepCell {
    pub degree: usize,
    pub r2: f64,
    pub eps: f64,
    pub alpha_ref: f64,
    pub ques: QuesReport,
    pub ques_bootstrap_ci95: f64,
    /// `None` when `eps` is too large for the bracket.
    pub bounds: Option<FidelityBounds>,
    pub mean_sxes: f64,
    pub sxes_se: f64,
    /// Empirical denominator from the same instances; `None` if it vanishes.
    pub sxes: Option<SxesEstimate>,
    /// Haar closed-form denominator.
    pub sxes_analytic: Option<SxesEstimate>,
}

fn ill_conditioned_as_none(r: Result<SxesEstimate>) -> Result<Option<SxesEstimate>> {
    match r {
        Ok(e) => Ok(Some(e)),
        Err(Error::IllConditioned(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

impl FidelitySweep {
    pub fn validate(&self) -> Result<()> {
        let dim = 1usize.checked_shl(self.n as u32 + 1).unwrap_or(usize::MAX);
        if self.n + 1 >= usize::BITS as usize || dim > MAX_DENSE_DIM {
            return Err(Error::Capacity(format!(
                "n = {} needs a {}-qubit register, beyond the dense limit of {MAX_DENSE_DIM}",
                self.n,
                self.n + 1
            )));
        }
        if self.n == 0 || self.instances < 2 || self.shots == 0 || self.depth == 0 || self.degrees.is_empty() || self.r2.is_empty()
        {
            return Err(Error::InvalidInput(
                "need n >= 1, depth >= 1, at least two instances, one shot, one degree and one rate".into(),
            ));
        }
        for &d in &self.degrees {
            if d == 0 || d % 2 != 0 {
                return Err(Error::InvalidInput(format!("degrees must be even and positive, got {d}")));
            }
        }
        for &r in &self.r2 {
            NoiseModel::new(r)?;
        }
        make_coupling(self.coupling, self.n + 1)?;
        Ok(())
    }

    /// One cell per `(degree, r2)`, degree-major. `analytic` supplies the
    /// closed-form sXES denominator when given.
    pub fn run(&self, analytic: Option<&HMoments>) -> Result<Vec<SweepCell>> {
        self.validate()?;
        let coupling = make_coupling(self.coupling, self.n + 1)?;
        let g1 = layers_to_g1(self.depth, self.n + 1);
        let master = RandomSource::new(self.seed);
        let noises: Vec<NoiseModel> = self.r2.iter().map(|&r| NoiseModel::new(r)).collect::<Result<_>>()?;
        let mut cells = Vec::with_capacity(self.degrees.len() * self.r2.len());
        for (di, &degree) in self.degrees.iter().enumerate() {
            let phases = phases_for(self.t, degree, self.phase_tol, self.max_restarts, self.seed)?;
            let eps = phases.sup_error;
            let m = self.instances;
            let mut dists = Vec::with_capacity(m);
            let mut p_exp = vec![Vec::with_capacity(m); noises.len()];
            let mut sx = vec![Vec::with_capacity(m); noises.len()];
            let mut refs = vec![0.0; noises.len()];
            // One simulator at a time: its checkpoints can be large.
            for k in 0..m {
                let stream = master.split(k as u64);
                let circuit = generate_rqc(&coupling, g1, 0.5, &mut stream.clone())?;
                let (c1, c2) = (circuit.one_qubit_count(), circuit.two_qubit_count());
                let inst = MqsvtInstance::from_circuit(circuit, &phases)?;
                let dist = inst.output_distribution();
                let expanded = ExpandedCircuit::from_mqsvt(&inst)?;
                let sim = TrajectorySimulator::new(&expanded);
                for (j, noise) in noises.iter().enumerate() {
                    let key = ((di as u64) << 32) | (j as u64 + 1);
                    let hist = sim.sample(noise, self.shots, &stream.split(key))?;
                    p_exp[j].push(hist.success_frequency());
                    sx[j].push(histogram_sxes(&dist, &hist)?);
                    refs[j] += alpha_ref(c1, c2, inst.queries(), noise) / m as f64;
                }
                dists.push(dist);
            }
            let analytic_den = analytic.map(SxesDenominator::analytic);
            for (j, &r2) in self.r2.iter().enumerate() {
                let report = ques(&p_exp[j])?.with_run(self.n, degree / 2, self.t, self.shots, self.seed);
                let mut boot_rng = master.split(u64::MAX - (di * self.r2.len() + j) as u64);
                let ques_bootstrap_ci95 = bootstrap_ci95(&p_exp[j], BOOTSTRAP_RESAMPLES, &mut boot_rng)?;
                let bounds = alpha_from_ques(report.mean.clamp(0.0, 1.0), eps).ok();
                let (mean_sxes, sxes_se) = mean_and_se(&sx[j]);
                let sxes = ill_conditioned_as_none(alpha_from_sxes_paired(&sx[j], &dists, self.n))?;
                let sxes_analytic = match &analytic_den {
                    Some(den) => ill_conditioned_as_none(alpha_from_sxes(mean_sxes, self.n, den))?,
                    None => None,
                };
                cells.push(SweepCell {
                    degree,
                    r2,
                    eps,
                    alpha_ref: refs[j],
                    ques: report,
                    ques_bootstrap_ci95,
                    bounds,
                    mean_sxes,
                    sxes_se,
                    sxes,
                    sxes_analytic,
                });
            }
        }
        Ok(cells)
    }
}
