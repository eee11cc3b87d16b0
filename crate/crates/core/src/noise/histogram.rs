use std::fmt::Write as _;
use std::path::Path;

use super::NoiseModel;
use crate::{Error, Result};

/// Shot counts over all `n_qubits`-bit strings; the ancilla is the leading
/// (most significant) bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub n_qubits: usize,
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseModel,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.shots as f64).collect()
    }

    /// Fraction of shots with the ancilla reading 0, an estimate of `P_exp(U)`.
    pub fn success_frequency(&self) -> f64 {
        let half = self.counts.len() / 2;
        self.counts[..half].iter().sum::<u64>() as f64 / self.shots as f64
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# shots={},seed={},r1={:e},r2={:e}\nbitstring,count\n",
            self.shots, self.seed, self.noise.r1, self.noise.r2
        );
        for (i, c) in self.counts.iter().enumerate() {
            let _ = writeln!(s, "{:0width$b},{c}", i, width = self.n_qubits);
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| Error::Parse("missing histogram header".into()))?;
        let mut shots = None;
        let mut seed = None;
        let (mut r1, mut r2) = (None, None);
        for field in header.split(',') {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field {field:?}")))?;
            let bad = |_| Error::Parse(format!("bad value for {k}: {v:?}"));
            match k.trim() {
                "shots" => shots = Some(v.parse::<u64>().map_err(bad)?),
                "seed" => seed = Some(v.parse::<u64>().map_err(bad)?),
                "r1" => r1 = Some(v.parse::<f64>().map_err(|_| Error::Parse(format!("bad r1 {v:?}")))?),
                "r2" => r2 = Some(v.parse::<f64>().map_err(|_| Error::Parse(format!("bad r2 {v:?}")))?),
                _ => {}
            }
        }
        let missing = |k: &str| Error::Parse(format!("header lacks {k}"));
        if lines.next().map(str::trim) != Some("bitstring,count") {
            return Err(Error::Parse("missing column header".into()));
        }
        let mut n_qubits = None;
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (bits, count) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad row {line:?}")))?;
            let width = *n_qubits.get_or_insert(bits.len());
            if bits.len() != width {
                return Err(Error::Parse(format!("row {line:?} has the wrong width")));
            }
            let idx = usize::from_str_radix(bits, 2).map_err(|_| Error::Parse(format!("bad bitstring {bits:?}")))?;
            let c = count.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad count {count:?}")))?;
            rows.push((idx, c));
        }
        let n_qubits = n_qubits.ok_or_else(|| Error::Parse("histogram has no rows".into()))?;
        let mut counts = vec![0u64; 1 << n_qubits];
        for (i, c) in rows {
            counts[i] += c;
        }
        let shots = shots.ok_or_else(|| missing("shots"))?;
        if counts.iter().sum::<u64>() != shots {
            return Err(Error::Parse("counts do not sum to shots".into()));
        }
        Ok(Self {
            n_qubits,
            shots,
            seed: seed.ok_or_else(|| missing("seed"))?,
            noise: NoiseModel::with_rates(r1.ok_or_else(|| missing("r1"))?, r2.ok_or_else(|| missing("r2"))?)?,
            counts,
        })
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}
