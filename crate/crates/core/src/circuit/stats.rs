use rayon::prelude::*;

use super::coupling::CouplingMap;
use super::rqc::{generate_rqc, layers_to_g1, CircuitSpec};
use super::sim::{apply_circuit, zero_state};
use crate::numerics::RandomSource;
use crate::{Error, Result};

/// Haar values for the column `p_i = |U_{i0}|^2` of an `N x N` unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarReference {
    pub dim: usize,
    /// `E[-sum p ln p] = sum_{i=2}^N 1/i`.
    pub entropy: f64,
    /// `E[sum p^k] = prod_{i=1}^{k-1} (1+i)/(N+i)` for `k = 1..=k_max`.
    pub moments: Vec<f64>,
    /// `Var[sum p^k] / E[sum p^k]^2` for `k = 1..=k_max`.
    pub moment_rel_variance: Vec<f64>,
}

pub fn haar_reference(dim: usize, k_max: usize) -> HaarReference {
    let n = dim as f64;
    let entropy = (2..=dim).map(|i| 1.0 / i as f64).sum();
    let moments = (1..=k_max)
        .map(|k| (1..k).map(|i| (1.0 + i as f64) / (n + i as f64)).product())
        .collect();
    let moment_rel_variance = (1..=k_max)
        .map(|k| {
            let binom = binomial(2 * k, k);
            let prod: f64 = (k..2 * k)
                .map(|i| (n - k as f64 + i as f64) / (n + i as f64))
                .product();
            (binom / n + (n - 1.0) / n) * prod - 1.0
        })
        .collect();
    HaarReference {
        dim,
        entropy,
        moments,
        moment_rel_variance,
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Sample means (and standard errors) of the column statistics, each
/// divided by its Haar value.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnStats {
    pub instances: usize,
    pub dim: usize,
    pub entropy_ratio: f64,
    pub entropy_ratio_se: f64,
    pub moment_ratios: Vec<f64>,
    pub moment_ratio_se: Vec<f64>,
}

impl ColumnStats {
    pub fn entropy_deviation(&self) -> f64 {
        (self.entropy_ratio - 1.0).abs()
    }
}

/// `|<i|C|0>|^2` for every basis state `i`.
pub fn column_probabilities(c: &CircuitSpec) -> Vec<f64> {
    let mut s = zero_state(c.n);
    apply_circuit(c, &mut s).expect("state sized from circuit");
    s.iter().map(|z| z.norm_sqr()).collect()
}

/// Entropy and moments `k = 1..=k_max` of each probability vector, averaged
/// and normalised by the Haar reference.
pub fn column_stats<'a>(columns: impl IntoIterator<Item = &'a [f64]>, k_max: usize) -> Result<ColumnStats> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim = 0;
    for p in columns {
        if dim == 0 {
            dim = p.len();
        } else if p.len() != dim {
            return Err(Error::invalid("columns of different lengths"));
        }
        rows.push(per_column(p, k_max));
    }
    summarise(&rows, dim, k_max)
}

fn per_column(p: &[f64], k_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; k_max + 1];
    for &x in p {
        if x > 0.0 {
            out[0] -= x * x.ln();
        }
        let mut pk = x;
        for slot in out.iter_mut().skip(1) {
            *slot += pk;
            pk *= x;
        }
    }
    out
}

fn summarise(rows: &[Vec<f64>], dim: usize, k_max: usize) -> Result<ColumnStats> {
    let m = rows.len();
    if m < 2 {
        return Err(Error::invalid("need at least two instances"));
    }
    let haar = haar_reference(dim, k_max);
    let mut refs = vec![haar.entropy];
    refs.extend(haar.moments.iter().copied());
    let mut means = vec![0.0; k_max + 1];
    let mut ses = vec![0.0; k_max + 1];
    for c in 0..=k_max {
        let mean = rows.iter().map(|r| r[c]).sum::<f64>() / m as f64;
        let var = rows.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        means[c] = mean / refs[c];
        ses[c] = (var / m as f64).sqrt() / refs[c];
    }
    Ok(ColumnStats {
        instances: m,
        dim,
        entropy_ratio: means[0],
        entropy_ratio_se: ses[0],
        moment_ratios: means[1..].to_vec(),
        moment_ratio_se: ses[1..].to_vec(),
    })
}

/// Column statistics of `instances` random circuits with `layers` layers.
/// Instance `i` uses `rng.split(i)`, so the result does not depend on the
/// thread count.
pub fn sample_column_stats(
    coupling: &CouplingMap,
    layers: usize,
    instances: usize,
    k_max: usize,
    rng: &RandomSource,
) -> Result<ColumnStats> {
    let g1 = layers_to_g1(layers, coupling.n);
    let rows: Vec<Vec<f64>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.split(i as u64);
            let c = generate_rqc(coupling, g1, 0.5, &mut r)?;
            Ok(per_column(&column_probabilities(&c), k_max))
        })
        .collect::<Result<_>>()?;
    summarise(&rows, 1 << coupling.n, k_max)
}
