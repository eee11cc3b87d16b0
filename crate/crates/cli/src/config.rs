//! Per-command config documents.
//!
//! A config is one JSON object. `--seed` and `--out` override the `seed` and
//! `out` fields. Unknown fields are rejected and the seed is mandatory.
//! `out` names the artifact directory and is not part of the run digest.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use hsbench_core::circuit::CouplingKind;

use crate::pipeline::square_grid;
use crate::Failure;

pub trait Validate {
    fn validate(&self) -> Result<(), String>;
}

pub struct Loaded<T> {
    pub config: T,
    pub out: PathBuf,
}

pub fn load<T: DeserializeOwned + Validate>(
    path: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<Loaded<T>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Failure::Config("config must be a JSON object".into()))?;
    let file_out = match obj.remove("out") {
        None => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => return Err(Failure::Config("`out` must be a string".into())),
    };
    if let Some(s) = seed {
        obj.insert("seed".into(), Value::from(s));
    }
    if !obj.contains_key("seed") {
        return Err(Failure::Config("a seed is required (config field `seed` or --seed)".into()));
    }
    let config: T = serde_json::from_value(value).map_err(|e| Failure::Config(e.to_string()))?;
    config.validate().map_err(Failure::Config)?;
    Ok(Loaded {
        config,
        out: out.or(file_out).unwrap_or_else(|| PathBuf::from(".")),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    Linear,
    /// The most square grid holding the register.
    Grid,
    Full,
}

impl Coupling {
    pub fn kind(self, qubits: usize) -> CouplingKind {
        match self {
            Coupling::Linear => CouplingKind::Linear,
            Coupling::Grid => square_grid(qubits),
            Coupling::Full => CouplingKind::Full,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coupling::Linear => "linear",
            Coupling::Grid => "grid",
            Coupling::Full => "full",
        }
    }
}

fn check(ok: bool, msg: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn check_grid(t_min: f64, t_max: f64, t_step: f64) -> Result<(), String> {
    check(
        t_min.is_finite() && t_max.is_finite() && t_step > 0.0 && t_max > t_min,
        "time grid needs finite t_min < t_max and t_step > 0",
    )
}

fn default_solver_restarts() -> usize {
    400
}

fn default_sweep_restarts() -> usize {
    40
}

fn default_k_max() -> usize {
    5
}

fn default_step() -> f64 {
    0.02
}

fn default_alphas() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 0.75, 1.0]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolvePhasesConfig {
    pub seed: u64,
    pub t: f64,
    /// Polynomial degree `2d`.
    pub degree: usize,
    pub tol: f64,
    #[serde(default = "default_solver_restarts")]
    pub max_restarts: usize,
}

impl Validate for SolvePhasesConfig {
    fn validate(&self) -> Result<(), String> {
        check(self.t.is_finite(), "t must be finite")?;
        check(self.degree > 0 && self.degree % 2 == 0, "degree must be even and positive")?;
        check(self.tol > 0.0, "tol must be positive")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyPhasesConfig {
    pub seed: u64,
    pub phase_file: PathBuf,
    /// Published sup error to compare against.
    #[serde(default)]
    pub reference_sup_error: Option<f64>,
    /// Relative tolerance for the comparison.
    #[serde(default)]
    pub rel_tol: Option<f64>,
}

impl Validate for VerifyPhasesConfig {
    fn validate(&self) -> Result<(), String> {
        check(
            self.reference_sup_error.is_none_or(|r| r > 0.0),
            "reference_sup_error must be positive",
        )?;
        check(self.rel_tol.is_none_or(|r| r > 0.0), "rel_tol must be positive")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuesConfig {
    pub seed: u64,
    /// System-qubit counts, one heatmap row each.
    pub n: Vec<usize>,
    /// Polynomial degrees `2d`, one heatmap column each.
    pub degrees: Vec<usize>,
    pub t: f64,
    pub instances: usize,
    pub shots: u64,
    pub coupling: Coupling,
    /// Layers of the `U_A` circuit.
    pub depth: usize,
    #[serde(default)]
    pub r2: f64,
    #[serde(default)]
    pub phase_tol: Option<f64>,
    #[serde(default = "default_sweep_restarts")]
    pub max_restarts: usize,
}

impl Validate for QuesConfig {
    fn validate(&self) -> Result<(), String> {
        check(!self.n.is_empty() && !self.degrees.is_empty(), "n and degrees must be non-empty")?;
        check(self.t.is_finite(), "t must be finite")?;
        check((0.0..=1.0).contains(&self.r2), "r2 must lie in [0, 1]")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub seed: u64,
    pub n: usize,
    pub t: f64,
    pub degrees: Vec<usize>,
    pub r2: Vec<f64>,
    pub instances: usize,
    pub shots: u64,
    pub coupling: Coupling,
    pub depth: usize,
    #[serde(default)]
    pub phase_tol: Option<f64>,
    #[serde(default = "default_sweep_restarts")]
    pub max_restarts: usize,
}

impl Validate for BenchmarkConfig {
    fn validate(&self) -> Result<(), String> {
        check(self.n >= 2, "benchmark needs n >= 2 for the Haar moments")?;
        check(self.t.is_finite(), "t must be finite")?;
        check(!self.degrees.is_empty() && !self.r2.is_empty(), "degrees and r2 must be non-empty")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaarConvergenceConfig {
    pub seed: u64,
    /// Total register size.
    pub qubits: usize,
    pub couplings: Vec<Coupling>,
    pub depths: Vec<usize>,
    pub instances: usize,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
}

impl Validate for HaarConvergenceConfig {
    fn validate(&self) -> Result<(), String> {
        check(self.qubits >= 2, "need at least two qubits")?;
        check(!self.couplings.is_empty() && !self.depths.is_empty(), "couplings and depths must be non-empty")?;
        check(self.depths.iter().all(|&d| d > 0), "depths must be positive")?;
        check(self.instances >= 2, "need at least two instances")?;
        check(self.k_max >= 2, "k_max must be at least 2")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupremacyConfig {
    pub seed: u64,
    pub n: usize,
    pub t_min: f64,
    pub t_max: f64,
    #[serde(default = "default_step")]
    pub t_step: f64,
    /// Fidelities at which `b(alpha)` is tabulated.
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
}

impl Validate for SupremacyConfig {
    fn validate(&self) -> Result<(), String> {
        check(self.n >= 2, "need n >= 2")?;
        check_grid(self.t_min, self.t_max, self.t_step)?;
        check(self.alphas.iter().all(|a| (0.0..=1.0).contains(a)), "alphas must lie in [0, 1]")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToptMcConfig {
    pub seed: u64,
    pub n: usize,
    pub t_min: f64,
    pub t_max: f64,
    #[serde(default = "default_step")]
    pub t_step: f64,
    pub samples: usize,
}

impl Validate for ToptMcConfig {
    fn validate(&self) -> Result<(), String> {
        check(self.n >= 1, "need n >= 1")?;
        check_grid(self.t_min, self.t_max, self.t_step)?;
        check(self.samples >= 10, "need at least 10 samples")
    }
}
