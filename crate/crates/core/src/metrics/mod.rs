//! Benchmark scores and the fidelity estimators built on them.
//!
//! QUES is the instance average of `P_exp(U)`, the probability of reading
//! the ancilla as 0. sXES pairs noiseless and measured probabilities of the
//! nonzero system strings. Both invert the global depolarizing model
//! `p_exp = alpha p + (1 - alpha) / 2^(n+1)` for `alpha`.

use serde::Serialize;

use crate::analytics::{CriticalPoint, HMoments};
use crate::mqsvt::OutputDistribution;
use crate::noise::Histogram;
use crate::{Error, RandomSource, Result};

const Z95: f64 = 1.96;

#[derive(Clone, Debug, Serialize)]
pub struct QuesReport {
    pub mean: f64,
    /// Half-width of the normal-approximation 95% interval over instances.
    pub ci95: f64,
    pub std_error: f64,
    pub per_instance: Vec<f64>,
    pub n: usize,
    pub queries: usize,
    pub t: f64,
    pub shots: u64,
    pub seed: u64,
}

impl QuesReport {
    pub fn with_run(mut self, n: usize, queries: usize, t: f64, shots: u64, seed: u64) -> Self {
        self.n = n;
        self.queries = queries;
        self.t = t;
        self.shots = shots;
        self.seed = seed;
        self
    }

    /// `2 QUES - 1` with its interval half-width.
    pub fn alpha(&self) -> (f64, f64) {
        (2.0 * self.mean - 1.0, 2.0 * self.ci95)
    }
}

/// Mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Percentile-bootstrap 95% half-width of the mean: half the distance
/// between the 2.5% and 97.5% quantiles of `resamples` resampled means.
pub fn bootstrap_ci95(xs: &[f64], resamples: usize, rng: &mut RandomSource) -> Result<f64> {
    if xs.len() < 2 || resamples < 10 {
        return Err(Error::invalid("bootstrap needs at least two values and ten resamples"));
    }
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..xs.len()).map(|_| xs[rng.below(xs.len())]).sum::<f64>() / xs.len() as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let at = |q: f64| means[((q * (resamples - 1) as f64).round() as usize).min(resamples - 1)];
    Ok(0.5 * (at(0.975) - at(0.025)))
}

/// QUES over per-instance `P_exp(U)` values.
pub fn ques(per_instance: &[f64]) -> Result<QuesReport> {
    if per_instance.len() < 2 {
        return Err(Error::invalid(format!(
            "QUES needs at least two instances, got {}",
            per_instance.len()
        )));
    }
    // Frequencies summed in floating point may overshoot 1 by a few ulps.
    if let Some(bad) = per_instance.iter().find(|p| !(-1e-12..=1.0 + 1e-12).contains(*p)) {
        return Err(Error::invalid(format!("P_exp values must lie in [0, 1], got {bad}")));
    }
    let (mean, se) = mean_and_se(per_instance);
    Ok(QuesReport {
        mean,
        ci95: Z95 * se,
        std_error: se,
        per_instance: per_instance.to_vec(),
        n: 0,
        queries: 0,
        t: f64::NAN,
        shots: 0,
        seed: 0,
    })
}

/// `sum_{x != 0^n} p(U, x) p_exp(U, x)` over system strings with the ancilla
/// at 0. `p_exp` is indexed like the full `(n+1)`-qubit distribution, or
/// like the system register alone; raw (unconditioned) values are expected.
pub fn sxes(p: &OutputDistribution, p_exp: &[f64]) -> Result<f64> {
    let sys = p.system();
    if p_exp.len() != sys.len() && p_exp.len() != p.probabilities.len() {
        return Err(Error::invalid(format!(
            "p_exp has {} entries, expected {} or {}",
            p_exp.len(),
            sys.len(),
            p.probabilities.len()
        )));
    }
    Ok(sys.iter().zip(p_exp).skip(1).map(|(a, b)| a * b).sum())
}

/// sXES with measured frequencies standing in for `p_exp`.
pub fn histogram_sxes(p: &OutputDistribution, hist: &Histogram) -> Result<f64> {
    sxes(p, &hist.frequencies())
}

/// The classical expectations in the sXES fidelity formula:
/// `E[sum_{x != 0^n} p]` and `E[sum_{x != 0^n} p^2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SxesDenominator {
    pub mean_sum_p: f64,
    pub mean_sum_p_sq: f64,
}

impl SxesDenominator {
    /// Haar-ensemble closed forms.
    pub fn analytic(m: &HMoments) -> Self {
        Self {
            mean_sum_p: m.mean_sum_p(),
            mean_sum_p_sq: m.mean_sum_p_sq(),
        }
    }

    /// Averages over the noiseless distributions of the actual instances.
    pub fn empirical(dists: &[OutputDistribution]) -> Result<Self> {
        if dists.is_empty() {
            return Err(Error::invalid("no instances"));
        }
        let m = dists.len() as f64;
        let (mut s1, mut s2) = (0.0, 0.0);
        for d in dists {
            for p in &d.system()[1..] {
                s1 += p;
                s2 += p * p;
            }
        }
        Ok(Self {
            mean_sum_p: s1 / m,
            mean_sum_p_sq: s2 / m,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SxesEstimate {
    /// Clamped to `[0, 1]`.
    pub alpha: f64,
    pub raw: f64,
    /// `d alpha / d sXES`, for propagating the error of the mean score.
    pub sensitivity: f64,
    /// Standard error of `raw` when it is known; `NaN` otherwise.
    pub std_error: f64,
}

/// `alpha = (E[sXES] - E[sum p] / 2^(n+1)) / (E[sum p^2] - E[sum p] / 2^(n+1))`.
pub fn alpha_from_sxes(mean_sxes: f64, n: usize, den: &SxesDenominator) -> Result<SxesEstimate> {
    let uniform = den.mean_sum_p / (1u64 << (n + 1)) as f64;
    let d = den.mean_sum_p_sq - uniform;
    if d.abs() < 1e-15 {
        return Err(Error::IllConditioned(format!(
            "sXES denominator {d:e} vanishes at n = {n}"
        )));
    }
    let raw = (mean_sxes - uniform) / d;
    Ok(SxesEstimate {
        alpha: raw.clamp(0.0, 1.0),
        raw,
        sensitivity: 1.0 / d,
        std_error: f64::NAN,
    })
}

/// sXES fidelity with the empirical denominator of the same instances,
/// treated as a ratio of means. The standard error comes from the
/// per-instance residuals `s_k - u_k - alpha (q_k - u_k)`, so the
/// instance-to-instance spread shared by numerator and denominator cancels.
pub fn alpha_from_sxes_paired(sxes_values: &[f64], dists: &[OutputDistribution], n: usize) -> Result<SxesEstimate> {
    if sxes_values.len() != dists.len() || dists.len() < 2 {
        return Err(Error::invalid(format!(
            "need matching sXES values and distributions for at least two instances, got {} and {}",
            sxes_values.len(),
            dists.len()
        )));
    }
    let den = SxesDenominator::empirical(dists)?;
    let mean = sxes_values.iter().sum::<f64>() / sxes_values.len() as f64;
    let mut est = alpha_from_sxes(mean, n, &den)?;
    let scale = 1.0 / (1u64 << (n + 1)) as f64;
    let residuals: Vec<f64> = sxes_values
        .iter()
        .zip(dists)
        .map(|(s, d)| {
            let sum_p: f64 = d.system()[1..].iter().sum();
            let sum_p2: f64 = d.system()[1..].iter().map(|p| p * p).sum();
            s - scale * sum_p - est.raw * (sum_p2 - scale * sum_p)
        })
        .collect();
    est.std_error = mean_and_se(&residuals).1 * est.sensitivity.abs();
    Ok(est)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityBounds {
    /// `2 QUES - 1`.
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
    /// Whether `lower <= alpha <= upper`; guaranteed only for `QUES >= 3/8`.
    pub contains_estimate: bool,
}

/// Fidelity from QUES, bracketed using `P(U) in [1 - 2 eps, 1]`:
/// `lower = (2 (1 - 2 eps) QUES - 1) / (1 + 2 eps)`,
/// `upper = (2 QUES - (1 - 2 eps)) / (1 - 8 eps)`.
pub fn alpha_from_ques(ques: f64, eps: f64) -> Result<FidelityBounds> {
    if !(0.0..=1.0).contains(&ques) {
        return Err(Error::invalid(format!("QUES must lie in [0, 1], got {ques}")));
    }
    if !(0.0..0.125).contains(&eps) {
        return Err(Error::invalid(format!("eps must lie in [0, 1/8), got {eps}")));
    }
    let alpha = 2.0 * ques - 1.0;
    let lower = (2.0 * (1.0 - 2.0 * eps) * ques - 1.0) / (1.0 + 2.0 * eps);
    let upper = (2.0 * ques - (1.0 - 2.0 * eps)) / (1.0 - 8.0 * eps);
    Ok(FidelityBounds {
        alpha,
        lower,
        upper,
        contains_estimate: lower <= alpha && alpha <= upper,
    })
}

/// The three fidelity estimates of one benchmark cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityEstimates {
    pub alpha_ques: f64,
    pub alpha_sxes: Option<f64>,
    pub alpha_sxes_raw: Option<f64>,
    pub alpha_ref: Option<f64>,
    pub lower: f64,
    pub upper: f64,
}

impl FidelityEstimates {
    pub fn new(bounds: FidelityBounds, sxes: Option<SxesEstimate>, alpha_ref: Option<f64>) -> Self {
        Self {
            alpha_ques: bounds.alpha,
            alpha_sxes: sxes.map(|s| s.alpha),
            alpha_sxes_raw: sxes.map(|s| s.raw),
            alpha_ref,
            lower: bounds.lower,
            upper: bounds.upper,
        }
    }
}

/// Large-`N` heavy-output parameters: `b(alpha) = 1 + gamma (alpha - alpha*) / (alpha + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupremacyParams {
    pub n: usize,
    pub h1: f64,
    pub h2: f64,
    pub gamma: f64,
    /// `None` when `gamma = 0`.
    pub alpha_star: Option<f64>,
}

impl SupremacyParams {
    /// Written as `1 + (gamma alpha - H1) / (alpha + 1)`, which stays defined
    /// when `gamma = 0`.
    pub fn b(&self, alpha: f64) -> f64 {
        1.0 + (self.gamma * alpha - self.h1) / (alpha + 1.0)
    }

    /// `N E[sXES] / P_0` from the closed-form Haar expectations, with
    /// `P_0 = (1 + alpha) / 2`. It matches [`Self::b`] at `alpha = 0` up to
    /// `O(1/N)`; for `alpha > 0` its large-`N` limit is
    /// `(1 + 3 alpha - H1 - 7 alpha H1 + 4 alpha H2) / (1 + alpha)`, which
    /// differs from `b` in the `alpha H1` coefficient.
    pub fn b_finite(&self, alpha: f64) -> f64 {
        let m = HMoments::new(f64::NAN, 1 << self.n, self.h1, self.h2);
        let big_n = m.n_dim as f64;
        let sx = alpha * m.mean_sum_p_sq() + (1.0 - alpha) * m.mean_sum_p() / (2.0 * big_n);
        big_n * sx / ((1.0 + alpha) / 2.0)
    }

    /// `1 - E[p(U, 0^n)]`, the fully depolarized value of `b`.
    pub fn b_zero_direct(&self) -> f64 {
        1.0 - HMoments::new(f64::NAN, 1 << self.n, self.h1, self.h2).mean_p0()
    }
}

pub fn supremacy_params(h1: f64, h2: f64, n: usize) -> SupremacyParams {
    let m = HMoments::new(f64::NAN, 1 << n, h1, h2);
    SupremacyParams {
        n,
        h1,
        h2,
        gamma: m.gamma(),
        alpha_star: m.alpha_star(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardnessCheck {
    /// `QUES >= (1 + alpha*) / 2` and `gamma > 0`.
    pub hard: bool,
    /// `QUES - (1 + alpha*) / 2`.
    pub margin: f64,
    /// The lower fidelity bound at `eps` also clears `alpha*`.
    pub robust: bool,
}

pub fn hardness_check(ques: f64, alpha_star: Option<f64>, gamma: f64, eps: f64) -> Result<HardnessCheck> {
    let bounds = alpha_from_ques(ques, eps)?;
    let Some(a) = alpha_star else {
        return Ok(HardnessCheck {
            hard: false,
            margin: f64::NAN,
            robust: false,
        });
    };
    let margin = ques - (1.0 + a) / 2.0;
    let hard = margin >= 0.0 && gamma > 0.0;
    Ok(HardnessCheck {
        hard,
        margin,
        robust: hard && bounds.lower >= a,
    })
}

/// `b(alpha)` sampled along a time grid.
#[derive(Clone, Debug, Serialize)]
pub struct SupremacyCurve {
    pub n: usize,
    pub alphas: Vec<f64>,
    pub points: Vec<SupremacyPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SupremacyPoint {
    pub t: f64,
    pub gamma: f64,
    pub alpha_star: Option<f64>,
    /// `b(alpha)` for each entry of [`SupremacyCurve::alphas`].
    pub b: Vec<f64>,
}

pub fn supremacy_curve(n: usize, curve: &[CriticalPoint], alphas: &[f64]) -> SupremacyCurve {
    let points = curve
        .iter()
        .map(|c| {
            let p = supremacy_params(c.h1, c.h2, n);
            SupremacyPoint {
                t: c.t,
                gamma: p.gamma,
                alpha_star: p.alpha_star,
                b: alphas.iter().map(|&a| p.b(a)).collect(),
            }
        })
        .collect();
    SupremacyCurve {
        n,
        alphas: alphas.to_vec(),
        points,
    }
}
