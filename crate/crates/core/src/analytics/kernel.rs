//! `H_l` by contracting the determinantal kernel.
//!
//! With `G_{ab} = (2a + 1) sum_q c_q F_{q,a,b}` and `Gbar` its
//! conjugate-coefficient partner, the `2l`-fold index sum of the expansion
//! factorises over the cycles of each permutation into traces of matrix
//! products, `G` at positions `< l` and `Gbar` after. Both matrices are
//! banded with half-width `D`, so a trace costs `O(N D^2)`.

use std::collections::HashMap;

use num_complex::Complex64;

use super::legendre::{legendre_coeffs, LegendreCoeffs};
use super::moments::HMoments;
use super::triple::f_triple;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square banded matrix with half-width `w`.
#[derive(Clone, Debug)]
pub struct Banded {
    n: usize,
    w: usize,
    data: Vec<Complex64>,
}

impl Banded {
    fn zeros(n: usize, w: usize) -> Self {
        let w = w.min(n.saturating_sub(1));
        Self {
            n,
            w,
            data: vec![ZERO; n * (2 * w + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> usize {
        self.w
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * (2 * self.w + 1) + (j + self.w - i)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i.abs_diff(j) > self.w {
            ZERO
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Columns `j` with a stored entry in row `i`.
    fn cols(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.w)..(i + self.w + 1).min(self.n)
    }

    pub fn mul(&self, other: &Banded) -> Banded {
        let mut out = Banded::zeros(self.n, self.w + other.w);
        for i in 0..self.n {
            for k in self.cols(i) {
                let a = self.data[self.idx(i, k)];
                for j in other.cols(k) {
                    let at = out.idx(i, j);
                    out.data[at] += a * other.data[other.idx(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[self.idx(i, i)]).sum()
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_mul(&self, other: &Banded) -> Complex64 {
        let mut s = ZERO;
        for i in 0..self.n {
            for k in self.cols(i) {
                if i.abs_diff(k) <= other.w {
                    s += self.data[self.idx(i, k)] * other.data[other.idx(k, i)];
                }
            }
        }
        s
    }
}

/// The kernel matrices `G`, `Gbar` for one `(t, N)`.
#[derive(Clone, Debug)]
pub struct EigenKernelMatrix {
    pub n_dim: usize,
    pub coeffs: LegendreCoeffs,
    g: Banded,
    g_bar: Banded,
}

impl EigenKernelMatrix {
    pub fn new(coeffs: LegendreCoeffs, n_dim: usize) -> Result<Self> {
        if n_dim == 0 {
            return Err(Error::invalid("kernel dimension must be positive"));
        }
        let d = coeffs.cutoff;
        let mut g = Banded::zeros(n_dim, d);
        let mut g_bar = Banded::zeros(n_dim, d);
        // F_{q,a,a+m} along each diagonal: start at the first triangle-valid
        // row, then F_{q,a+1,b+1} = (2s+1-2q)/(s+1-q) (s+1)/(2s+3) F_{q,a,b}.
        for (q, &c) in coeffs.coeffs.iter().enumerate() {
            let qi = q as i64;
            for m in (-qi..=qi).step_by(2) {
                let a0 = ((qi - m) / 2) as usize;
                let mut f = f_triple(q, a0, (a0 as i64 + m) as usize);
                let mut a = a0;
                loop {
                    let b = (a as i64 + m) as usize;
                    if a >= n_dim || b >= n_dim {
                        break;
                    }
                    let w = (2 * a + 1) as f64 * f;
                    let k = g.idx(a, b);
                    g.data[k] += c * w;
                    g_bar.data[k] += c.conj() * w;
                    let s = ((q + a + b) / 2) as f64;
                    f *= (2.0 * s + 1.0 - 2.0 * q as f64) / (s + 1.0 - q as f64) * (s + 1.0) / (2.0 * s + 3.0);
                    a += 1;
                }
            }
        }
        Ok(Self {
            n_dim,
            coeffs,
            g,
            g_bar,
        })
    }

    pub fn g(&self) -> &Banded {
        &self.g
    }

    pub fn g_bar(&self) -> &Banded {
        &self.g_bar
    }

    /// `H_l` by cycle-trace contraction, for `l` in `{1, 2}` (any `l` works,
    /// at factorial cost in `2l`).
    pub fn h_moment(&self, ell: usize) -> Result<f64> {
        let n = self.n_dim;
        if ell == 0 || 2 * ell > n {
            return Err(Error::invalid(format!("need 1 <= l and N >= 2l, got l = {ell}, N = {n}")));
        }
        let m = 2 * ell;
        let mut cache: HashMap<Vec<bool>, Complex64> = HashMap::new();
        let mut total = ZERO;
        for perm in permutations(m) {
            let mut seen = vec![false; m];
            let mut term = Complex64::new(1.0, 0.0);
            let mut cycles = 0;
            for start in 0..m {
                if seen[start] {
                    continue;
                }
                cycles += 1;
                // Word of G (true) / Gbar (false) along the cycle.
                let mut word = Vec::new();
                let mut j = start;
                while !seen[j] {
                    seen[j] = true;
                    word.push(j < ell);
                    j = perm[j];
                }
                let key = canonical(&word);
                let tr = *cache.entry(key.clone()).or_insert_with(|| self.word_trace(&key));
                term *= tr;
            }
            let sign = if (m - cycles) % 2 == 0 { 1.0 } else { -1.0 };
            total += term * sign;
        }
        let falling: f64 = (0..m).map(|i| (n - i) as f64).product();
        let h = total / falling;
        if h.im.abs() > 1e-10 * h.re.abs().max(1.0) {
            return Err(Error::PrecisionLimit(format!(
                "H_{ell} has imaginary part {:e} at N = {n}",
                h.im
            )));
        }
        Ok(h.re)
    }

    fn word_trace(&self, word: &[bool]) -> Complex64 {
        let pick = |b: bool| if b { &self.g } else { &self.g_bar };
        match word.len() {
            1 => pick(word[0]).trace(),
            len => {
                let mut prod = pick(word[0]).clone();
                for &b in &word[1..len - 1] {
                    prod = prod.mul(pick(b));
                }
                prod.trace_mul(pick(word[len - 1]))
            }
        }
    }
}

/// Lexicographically smallest rotation; traces are invariant under it.
fn canonical(word: &[bool]) -> Vec<bool> {
    (0..word.len())
        .map(|r| word[r..].iter().chain(&word[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// All permutations of `0..m` in lexicographic order.
pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..m).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// Coefficient tolerance used when only `(t, N)` is given.
pub const DEFAULT_COEFF_TOL: f64 = 1e-12;

/// `H_l(t)` for system dimension `N`.
pub fn h_moment(ell: usize, t: f64, n_dim: usize) -> Result<f64> {
    EigenKernelMatrix::new(legendre_coeffs(t, DEFAULT_COEFF_TOL)?, n_dim)?.h_moment(ell)
}

/// `H1`, `H2` and the bit-string expectations derived from them.
pub fn expected_bitstring_moments(t: f64, n_dim: usize) -> Result<HMoments> {
    if n_dim < 4 {
        return Err(Error::invalid(format!("need N >= 4, got {n_dim}")));
    }
    let k = EigenKernelMatrix::new(legendre_coeffs(t, DEFAULT_COEFF_TOL)?, n_dim)?;
    Ok(HMoments::new(t, n_dim, k.h_moment(1)?, k.h_moment(2)?))
}
