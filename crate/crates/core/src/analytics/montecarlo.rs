//! Sampling oracles for the semi-analytic quantities.
//!
//! Each Haar sample is the top-left `N x N` block `A` of a Haar unitary of
//! size `2N`, drawn as the first `N` columns of a Haar isometry.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::special::mean_diag_evolution;
use crate::metrics::mean_and_se;
use crate::numerics::{haar_isometry, hermitian_eigen, RandomSource};
use crate::{ComplexMatrix, Error, Result};

fn system_block(n: usize, rng: &mut RandomSource) -> Result<ComplexMatrix> {
    let dim = 1usize << n;
    let q = haar_isometry(2 * dim, dim, rng)?;
    Ok(q.rows(0, dim).into_owned())
}

/// Eigenvalues of `H = A^dagger A`, clamped to `[0, 1]`.
fn sample_spectrum(n: usize, rng: &mut RandomSource) -> Result<Vec<f64>> {
    let a = system_block(n, rng)?;
    let (vals, _) = hermitian_eigen(&(a.adjoint() * &a));
    Ok(vals.into_iter().map(|l| l.clamp(0.0, 1.0)).collect())
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 10 {
        return Err(Error::invalid(format!("need at least 10 samples, got {samples}")));
    }
    Ok(())
}

/// Set partitions of `0..m`, by restricted growth strings.
fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, m: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == m {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, m, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, m, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, m, &mut Vec::new(), &mut out);
    out
}

/// `E[prod_{j<=l} f(lambda_j) prod_{j>l} conj f(lambda_j)]` over distinct
/// eigenvalue indices of one spectrum, with `f(x) = exp(-itx)`.
///
/// The sum over distinct index tuples is written through power sums
/// `s_m = sum_j exp(-i m t lambda_j)` by Moebius inversion on set partitions.
pub(crate) fn distinct_tuple_average(ell: usize, t: f64, lambdas: &[f64]) -> f64 {
    let n = lambdas.len();
    let m = 2 * ell;
    let power = |k: i64| -> Complex64 {
        lambdas
            .iter()
            .map(|&l| Complex64::from_polar(1.0, -(k as f64) * t * l))
            .sum()
    };
    let mut cache = std::collections::HashMap::new();
    let mut total = Complex64::new(0.0, 0.0);
    for part in set_partitions(m) {
        let mut term = Complex64::new(1.0, 0.0);
        for block in &part {
            let k = block.iter().map(|&j| if j < ell { 1i64 } else { -1 }).sum::<i64>();
            term *= *cache.entry(k).or_insert_with(|| power(k));
            let size = block.len();
            let fact: f64 = (1..size).map(|x| x as f64).product();
            if size % 2 == 0 {
                term = -term;
            }
            term *= fact;
        }
        total += term;
    }
    let falling: f64 = (0..m).map(|i| (n - i) as f64).product();
    total.re / falling
}

/// Monte-Carlo estimate of `H_l(t)` at `n` system qubits, with its standard
/// error.
pub fn mc_h_oracle(ell: usize, t: f64, n: usize, samples: usize, rng: &mut RandomSource) -> Result<(f64, f64)> {
    check_samples(samples)?;
    if ell == 0 || 2 * ell > 1 << n {
        return Err(Error::invalid(format!("need 1 <= l and 2^n >= 2l, got l = {ell}, n = {n}")));
    }
    let mut xs = Vec::with_capacity(samples);
    for _ in 0..samples {
        xs.push(distinct_tuple_average(ell, t, &sample_spectrum(n, rng)?));
    }
    Ok(mean_and_se(&xs))
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let m = samples.len() as f64;
    samples.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i as f64 + 1.0) / m - f).max(f - i as f64 / m)
    })
}

/// Arcsine CDF `(2/pi) arcsin(sqrt(x))` of `Beta(1/2, 1/2)`.
pub fn arcsine_cdf(x: f64) -> f64 {
    2.0 / PI * x.clamp(0.0, 1.0).sqrt().asin()
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelDensityCheck {
    pub n: usize,
    pub samples: usize,
    pub pooled: usize,
    pub ks: f64,
    pub mean: f64,
    pub mean_se: f64,
}

/// Pooled eigenvalues of sampled `H` against the arcsine law.
pub fn level_density_check(n: usize, samples: usize, rng: &mut RandomSource) -> Result<LevelDensityCheck> {
    check_samples(samples)?;
    let mut pooled = Vec::with_capacity(samples << n);
    for _ in 0..samples {
        pooled.extend(sample_spectrum(n, rng)?);
    }
    // Eigenvalues within a sample are correlated; the spread of per-sample
    // means gives an honest standard error.
    let dim = 1usize << n;
    let means: Vec<f64> = pooled.chunks(dim).map(|c| c.iter().sum::<f64>() / dim as f64).collect();
    let (mean, mean_se) = mean_and_se(&means);
    let ks = ks_statistic(&mut pooled, arcsine_cdf);
    Ok(LevelDensityCheck {
        n,
        samples,
        pooled: pooled.len(),
        ks,
        mean,
        mean_se,
    })
}

/// KS distance of `|U_00|^2` over Haar unitaries of size `dim` from
/// `Beta(1, dim - 1)`, whose CDF is `1 - (1 - p)^(dim - 1)`.
pub fn first_entry_beta_ks(dim: usize, samples: usize, rng: &mut RandomSource) -> Result<f64> {
    check_samples(samples)?;
    if dim < 2 {
        return Err(Error::invalid("dimension must be at least 2"));
    }
    let mut xs = Vec::with_capacity(samples);
    for _ in 0..samples {
        // Column 0 of a Haar unitary is a uniform unit vector.
        let col = haar_isometry(dim, 1, rng)?;
        xs.push(col[(0, 0)].norm_sqr());
    }
    let k = (dim - 1) as i32;
    Ok(ks_statistic(&mut xs, |p| 1.0 - (1.0 - p).powi(k)))
}

/// One time point of the diagonal-evolution study.
#[derive(Clone, Debug, Serialize)]
pub struct DiagEvolutionPoint {
    pub t: f64,
    /// `2^-n sum_j |<j|exp(-iHt)|j>|^2`, averaged over instances.
    pub mean_diag_prob: f64,
    pub diag_prob_min: f64,
    pub diag_prob_max: f64,
    /// `|<0|exp(-iHt)|0>|^2` averaged over instances.
    pub mean_p0: f64,
    pub p0_se: f64,
    /// `|E <0|exp(-iHt)|0>|^2`, the Jensen lower bound on `mean_p0`.
    pub jensen_bound: f64,
    /// `J_0(t/2)^2`, the large-`N` limit of the bound.
    pub bessel_bound: f64,
}

/// Monte-Carlo of `exp(-iHt)` diagonals over Haar `H` on a time grid.
pub fn diag_evolution_mc(
    n: usize,
    t_grid: &[f64],
    samples: usize,
    rng: &mut RandomSource,
) -> Result<Vec<DiagEvolutionPoint>> {
    check_samples(samples)?;
    let dim = 1usize << n;
    let mut diag = vec![Vec::with_capacity(samples); t_grid.len()];
    let mut p0 = vec![Vec::with_capacity(samples); t_grid.len()];
    let mut amp0 = vec![Complex64::new(0.0, 0.0); t_grid.len()];
    for _ in 0..samples {
        let a = system_block(n, rng)?;
        let (vals, vecs) = hermitian_eigen(&(a.adjoint() * &a));
        let weights: Vec<f64> = vecs.iter().map(|z| z.norm_sqr()).collect();
        for (ti, &t) in t_grid.iter().enumerate() {
            let phases: Vec<Complex64> = vals.iter().map(|&l| Complex64::from_polar(1.0, -t * l)).collect();
            let mut acc = 0.0;
            for j in 0..dim {
                // Column-major storage: entry (j, k) sits at k * dim + j.
                let z: Complex64 = (0..dim).map(|k| phases[k] * weights[k * dim + j]).sum();
                acc += z.norm_sqr();
                if j == 0 {
                    p0[ti].push(z.norm_sqr());
                    amp0[ti] += z;
                }
            }
            diag[ti].push(acc / dim as f64);
        }
    }
    Ok(t_grid
        .iter()
        .enumerate()
        .map(|(ti, &t)| {
            let (mean_p0, p0_se) = mean_and_se(&p0[ti]);
            let d = &diag[ti];
            DiagEvolutionPoint {
                t,
                mean_diag_prob: d.iter().sum::<f64>() / samples as f64,
                diag_prob_min: d.iter().copied().fold(f64::INFINITY, f64::min),
                diag_prob_max: d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mean_p0,
                p0_se,
                jensen_bound: (amp0[ti] / samples as f64).norm_sqr(),
                bessel_bound: mean_diag_evolution(t).norm_sqr(),
            }
        })
        .collect())
}
