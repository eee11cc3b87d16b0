//! Reproducible benchmark runs driven by JSON config files.
//!
//! Every run writes its artifacts and a `manifest.json` into the output
//! directory. Artifacts carry the run digest, the SHA-256 of the tool
//! version, command name and canonical config, so two runs with the same
//! config and seed produce byte-identical artifacts on any thread count.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod pipeline;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("config error: {0}")]
    Config(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("{0}")]
    Other(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Capacity(_) => 3,
            Failure::Convergence(_) => 4,
            Failure::Other(_) => 1,
        }
    }
}

impl From<hsbench_core::Error> for Failure {
    fn from(e: hsbench_core::Error) -> Self {
        use hsbench_core::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidInput(_) | E::Parse(_) => Failure::Config(msg),
            E::Capacity(_) => Failure::Capacity(msg),
            E::NoConvergence { .. } => Failure::Convergence(msg),
            _ => Failure::Other(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

/// Worker threads: the flag, then `HSBENCH_THREADS`, then rayon's default.
pub fn thread_count(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("HSBENCH_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Failure::Config(format!("HSBENCH_THREADS must be a thread count, got {v:?}"))),
        _ => Ok(None),
    }
}
