use hsbench_core::analytics::*;
use hsbench_core::metrics::{mean_and_se, supremacy_params};
use hsbench_core::mqsvt::{exact_evolution, MqsvtInstance};
use hsbench_core::numerics::{block_and_spectrum, haar_unitary};
use hsbench_core::qsp::{solve_phases, SolveOptions};
use hsbench_core::{Complex64, RandomSource};
use proptest::prelude::*;

fn fact(n: usize) -> f64 {
    assert!(n <= 170, "factorial overflows f64");
    (1..=n).map(|k| k as f64).product()
}

/// `F_{ijk}` from the factorial closed form.
fn f_closed(i: usize, j: usize, k: usize) -> f64 {
    if (i + j + k) % 2 == 1 || k > i + j || i > j + k || j > i + k {
        return 0.0;
    }
    let s = (i + j + k) / 2;
    let ratio = fact(2 * s - 2 * i) * fact(2 * s - 2 * j) * fact(2 * s - 2 * k) / fact(2 * s + 1);
    let multinomial = fact(s) / (fact(s - i) * fact(s - j) * fact(s - k));
    ratio * multinomial * multinomial
}

/// Spherical Bessel `j_q(z)` by its power series.
fn spherical_bessel(q: usize, z: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0 / (1..=q).map(|m| (2 * m + 1) as f64).product::<f64>();
    for k in 0..80 {
        if k > 0 {
            term *= -z * z / 2.0 / k as f64 / (2 * q + 2 * k + 1) as f64;
        }
        sum += term;
    }
    z.powi(q as i32) * sum
}

/// `c_q = (2q + 1) exp(-it/2) (-i)^q j_q(t/2)`.
fn coeff_oracle(t: f64, q: usize) -> Complex64 {
    let phase = Complex64::from_polar(1.0, -t / 2.0) * Complex64::new(0.0, -1.0).powu(q as u32);
    phase * ((2 * q + 1) as f64 * spherical_bessel(q, t / 2.0))
}

/// `M_{ab} = (2a + 1) sum_q C_q F_{q,a,b}` as a dense matrix from the oracles.
fn dense_kernel(t: f64, n: usize, conj: bool) -> Vec<Vec<Complex64>> {
    let cs: Vec<Complex64> = (0..=40).map(|q| coeff_oracle(t, q)).collect();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let s: Complex64 = cs
                        .iter()
                        .enumerate()
                        .map(|(q, c)| if conj { c.conj() } else { *c } * f_closed(q, a, b))
                        .sum();
                    s * (2 * a + 1) as f64
                })
                .collect()
        })
        .collect()
}

/// `H_1` as the literal double sum over `k_1, k_2` and the two permutations.
fn h1_literal(t: f64, n: usize) -> f64 {
    let g = dense_kernel(t, n, false);
    let gb = dense_kernel(t, n, true);
    let mut s = Complex64::new(0.0, 0.0);
    for k1 in 0..n {
        for k2 in 0..n {
            s += g[k1][k1] * gb[k2][k2] - g[k1][k2] * gb[k2][k1];
        }
    }
    (s / (n * (n - 1)) as f64).re
}

fn perms4() -> Vec<([usize; 4], f64)> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (0..i).all(|j| p[i] != p[j]));
                    if distinct {
                        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                        out.push((p, if inversions % 2 == 0 { 1.0 } else { -1.0 }));
                    }
                }
            }
        }
    }
    out
}

/// `H_2` as the literal four-fold index sum over all 24 permutations.
fn h2_literal(t: f64, n: usize) -> f64 {
    let g = dense_kernel(t, n, false);
    let gb = dense_kernel(t, n, true);
    let perms = perms4();
    let mut s = Complex64::new(0.0, 0.0);
    let mut k = [0usize; 4];
    for idx in 0..n.pow(4) {
        let mut r = idx;
        for kj in k.iter_mut() {
            *kj = r % n;
            r /= n;
        }
        for (p, sign) in &perms {
            let mut term = Complex64::new(*sign, 0.0);
            for j in 0..4 {
                let m = if j < 2 { &g } else { &gb };
                term *= m[k[j]][k[p[j]]];
            }
            s += term;
        }
    }
    (s / (n * (n - 1) * (n - 2) * (n - 3)) as f64).re
}

#[test]
fn f_triple_examples() {
    assert_eq!(f_triple(0, 0, 0), 1.0);
    assert_eq!(f_triple(1, 0, 0), 0.0);
    assert!((f_triple(1, 1, 0) - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(f_triple(1, 1, 3), 0.0);
}

#[test]
fn f_triple_matches_closed_form() {
    for i in 0..=60 {
        for j in i..=60 - i {
            for k in j..=60 - i - j {
                let (a, b) = (f_triple(i, j, k), f_closed(i, j, k));
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "({i},{j},{k}): {a} vs {b}");
            }
        }
    }
}

#[test]
fn f_triple_matches_quadrature() {
    let (x, w) = gauss_legendre(200);
    for i in 0..=30 {
        for j in 0..=30 - i {
            for k in 0..=30 - i - j {
                let q: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(&x, &w)| {
                        let p = legendre_values(30, x);
                        0.5 * w * p[i] * p[j] * p[k]
                    })
                    .sum();
                assert!((f_triple(i, j, k) - q).abs() < 1e-10, "({i},{j},{k})");
            }
        }
    }
}

#[test]
fn gauss_legendre_integrates_polynomials_exactly() {
    let (x, w) = gauss_legendre(20);
    assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    for p in 0..40 {
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
        let exact = if p % 2 == 0 { 2.0 / (p + 1) as f64 } else { 0.0 };
        assert!((q - exact).abs() < 1e-13, "x^{p}");
    }
}

#[test]
fn tensor_stores_triangle_valid_entries() {
    let tensor = TripleProductTensor::new(12);
    assert!(!tensor.is_empty());
    assert_eq!(tensor.get(3, 5, 2), f_triple(2, 3, 5));
    assert_eq!(tensor.get(1, 2, 4), 0.0);
    let expected = (0..=12)
        .flat_map(|i| (i..=12).flat_map(move |j| (j..=12).map(move |k| (i, j, k))))
        .filter(|&(i, j, k)| triangle_ok(i, j, k))
        .count();
    assert_eq!(tensor.len(), expected);
}

proptest! {
    #[test]
    fn f_triple_symmetric_and_bounded(i in 0usize..40, j in 0usize..40, k in 0usize..40) {
        let v = f_triple(i, j, k);
        prop_assert!(v.abs() <= 1.0);
        for (a, b, c) in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            prop_assert!((f_triple(a, b, c) - v).abs() <= 1e-15 * v.abs());
        }
        if !triangle_ok(i, j, k) {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn legendre_coeffs_satisfy_parseval(t in -10.0f64..10.0) {
        let c = legendre_coeffs(t, 1e-11).unwrap();
        let s: f64 = c.coeffs.iter().enumerate().map(|(q, c)| c.norm_sqr() / (2 * q + 1) as f64).sum();
        prop_assert!((s - 1.0).abs() < 1e-11);
        prop_assert!(c.grid_error <= 1e-11);
    }
}

#[test]
fn legendre_coeffs_match_spherical_bessel_series() {
    for t in [0.3, 1.0, 2.26, 4.8096, 8.0] {
        let c = legendre_coeffs(t, 1e-12).unwrap();
        for (q, cq) in c.coeffs.iter().enumerate() {
            assert!((cq - coeff_oracle(t, q)).norm() < 1e-12, "t={t} q={q}");
        }
    }
}

#[test]
fn legendre_coeffs_examples() {
    let c = legendre_coeffs(0.0, 1e-12).unwrap();
    assert_eq!(c.cutoff, 0);
    assert!((c.coeffs[0] - 1.0).norm() < 1e-14);
    let c = legendre_coeffs(4.8096, 1e-10).unwrap();
    assert!((15..=25).contains(&c.cutoff), "cutoff {}", c.cutoff);
    assert!(c.error_bound <= 1e-10);
    assert!(matches!(legendre_coeffs(1.0, 1e-15), Err(hsbench_core::Error::PrecisionLimit(_))));
    assert!(legendre_coeffs(1.0, 0.0).is_err());
}

#[test]
fn banded_products_match_dense() {
    let k = EigenKernelMatrix::new(legendre_coeffs(3.0, 1e-12).unwrap(), 40).unwrap();
    let (g, gb) = (k.g(), k.g_bar());
    let prod = g.mul(gb);
    for i in 0..40 {
        for j in 0..40 {
            let dense: Complex64 = (0..40).map(|m| g.get(i, m) * gb.get(m, j)).sum();
            assert!((prod.get(i, j) - dense).norm() < 1e-12);
        }
    }
    let tr: Complex64 = (0..40).map(|i| prod.get(i, i)).sum();
    assert!((g.trace_mul(gb) - tr).norm() < 1e-12);
}

#[test]
fn kernel_matches_dense_oracle_and_bandwidth() {
    let t = 2.5;
    let k = EigenKernelMatrix::new(legendre_coeffs(t, 1e-12).unwrap(), 24).unwrap();
    let dense = dense_kernel(t, 24, false);
    let d = k.coeffs.cutoff;
    for a in 0..24 {
        for b in 0..24 {
            assert!((k.g().get(a, b) - dense[a][b]).norm() < 1e-11, "({a},{b})");
            if a.abs_diff(b) > d {
                assert_eq!(k.g().get(a, b), Complex64::new(0.0, 0.0));
            }
            // With real coefficients G is symmetric once the row weight is removed.
            let lhs = k.g().get(a, b) / (2 * a + 1) as f64;
            let rhs = k.g().get(b, a) / (2 * b + 1) as f64;
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }
}

#[test]
fn h1_contraction_matches_literal_sum() {
    for n in [2, 5, 16, 64] {
        for t in [0.7, 2.0, 4.81] {
            let a = h_moment(1, t, n).unwrap();
            let b = h1_literal(t, n);
            assert!((a - b).abs() < 1e-10, "N={n} t={t}: {a} vs {b}");
        }
    }
}

#[test]
fn h2_contraction_matches_literal_sum() {
    for n in [4, 8, 16] {
        for t in [1.0, 4.81] {
            let a = h_moment(2, t, n).unwrap();
            let b = h2_literal(t, n);
            assert!((a - b).abs() < 1e-10, "N={n} t={t}: {a} vs {b}");
        }
    }
}

#[test]
fn h_moment_examples() {
    for n in [4, 16, 256] {
        assert!((h_moment(1, 0.0, n).unwrap() - 1.0).abs() < 1e-12);
        assert!((h_moment(2, 0.0, n).unwrap() - 1.0).abs() < 1e-12);
    }
    assert!(h_moment(2, 1.0, 3).is_err());
    // Twice the second zero of J_0: the large-N limit J_0(t/2)^2 vanishes.
    let t = 2.0 * 5.520_078_110_286_3;
    assert!(h_moment(1, t, 1024).unwrap().abs() <= 0.02);
}

#[test]
fn h_moments_bounded_and_limits() {
    let mut prev = (1.0, 1.0);
    for (i, t) in [0.01, 0.05, 0.2].into_iter().enumerate() {
        let h1 = h_moment(1, t, 64).unwrap();
        let h2 = h_moment(2, t, 64).unwrap();
        assert!(h1 <= prev.0 && h2 <= prev.1 && h1 > 0.99 - 0.05 * i as f64);
        prev = (h1, h2);
    }
    for t in uniform_grid(0.5, 8.0, 0.5) {
        let h1 = h_moment(1, t, 64).unwrap();
        let h2 = h_moment(2, t, 64).unwrap();
        assert!(h1.abs() <= 1.0 && h2.abs() <= 1.0);
    }
    // Long times wash the phases out.
    assert!(h_moment(1, 40.0, 64).unwrap().abs() < 0.05);
    assert!(h_moment(2, 40.0, 64).unwrap().abs() < 0.05);
}

#[test]
fn h_moment_agrees_with_monte_carlo() {
    let mut rng = RandomSource::new(11);
    for (ell, t, n) in [(1, 1.0, 4), (1, 2.0, 4), (2, 2.0, 4)] {
        let exact = h_moment(ell, t, 1 << n).unwrap();
        let (est, se) = mc_h_oracle(ell, t, n, 1000, &mut rng).unwrap();
        assert!((exact - est).abs() <= 3.0 * se, "l={ell} t={t}: {exact} vs {est} +- {se}");
    }
}

#[test]
fn mc_oracle_is_exact_at_zero_time() {
    let mut rng = RandomSource::new(2);
    let (h, se) = mc_h_oracle(2, 0.0, 3, 10, &mut rng).unwrap();
    assert!((h - 1.0).abs() < 1e-12 && se < 1e-12);
    assert!(mc_h_oracle(1, 1.0, 3, 5, &mut rng).is_err());
}

#[test]
fn bitstring_moment_identities() {
    let m = expected_bitstring_moments(0.0, 16).unwrap();
    assert!((m.mean_p0() - 1.0).abs() < 1e-12);
    assert!(m.mean_sum_p().abs() < 1e-12);
    assert!((m.mean_p0_sq() - 1.0).abs() < 1e-12);
    assert!(m.mean_sum_p_sq().abs() < 1e-12);
    for (t, n) in [(1.0, 8), (2.3, 32), (4.81, 128)] {
        let m = expected_bitstring_moments(t, n).unwrap();
        assert_eq!(m.mean_p0() + m.mean_sum_p(), 1.0);
    }
    assert!(expected_bitstring_moments(1.0, 2).is_err());
}

#[test]
fn first_moments_match_mqsvt_simulation() {
    let t = 1.0;
    let seq = solve_phases(t, 10, &SolveOptions { tol: 1e-5, ..Default::default() }).unwrap();
    let mut rng = RandomSource::new(5);
    let (mut p0, mut rest) = (vec![], vec![]);
    let mut eps: f64 = 0.0;
    for _ in 0..1000 {
        let inst = MqsvtInstance::new(haar_unitary(16, &mut rng).unwrap(), &seq).unwrap();
        eps = eps.max(inst.epsilon());
        let d = inst.output_distribution();
        p0.push(d.system()[0]);
        rest.push(d.nonzero_mass());
    }
    assert!(eps <= 1e-5);
    let m = expected_bitstring_moments(t, 8).unwrap();
    for (xs, expect) in [(p0, m.mean_p0()), (rest, m.mean_sum_p())] {
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - expect).abs() <= 3.0 * se + 2.0 * eps, "{mean} vs {expect} +- {se}");
    }
}

/// Exact `|<x|exp(-iHt)|0>|^2` over Haar blocks.
fn sampled_probabilities(n: usize, t: f64, samples: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = RandomSource::new(seed);
    (0..samples)
        .map(|_| {
            let u = haar_unitary(2 << n, &mut rng).unwrap();
            let spec = block_and_spectrum(&u, n).unwrap();
            let e = exact_evolution(&spec, t);
            (0..1 << n).map(|x| e[(x, 0)].norm_sqr()).collect()
        })
        .collect()
}

#[test]
fn second_moments_match_sampling_where_h1_vanishes() {
    let t = 4.8096;
    let probs = sampled_probabilities(5, t, 1000, 21);
    let m = expected_bitstring_moments(t, 32).unwrap();
    let p0_sq: Vec<f64> = probs.iter().map(|p| p[0] * p[0]).collect();
    let rest_sq: Vec<f64> = probs.iter().map(|p| p[1..].iter().map(|q| q * q).sum()).collect();
    for (xs, expect) in [(p0_sq, m.mean_p0_sq()), (rest_sq, m.mean_sum_p_sq())] {
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - expect).abs() <= 3.0 * se, "{mean} vs {expect} +- {se}");
    }
}

#[test]
fn second_moment_closed_forms_drift_when_h1_is_large() {
    // The closed forms count every three- and two-index coincidence as an
    // H1 term; for mixed conjugation patterns that is not the same average,
    // so at small t the sampled values sit well below them.
    let probs = sampled_probabilities(3, 1.0, 1000, 22);
    let m = expected_bitstring_moments(1.0, 8).unwrap();
    let (mean, se) = mean_and_se(&probs.iter().map(|p| p[0] * p[0]).collect::<Vec<_>>());
    assert!(m.mean_p0_sq() - mean > 10.0 * se, "{mean} vs {}", m.mean_p0_sq());
}

#[test]
fn b_at_zero_two_ways_agree() {
    for (t, n) in [(2.0, 10), (4.81, 10), (3.0, 11)] {
        let m = expected_bitstring_moments(t, 1 << n).unwrap();
        let p = supremacy_params(m.h1, m.h2, n);
        assert!((p.b(0.0) - p.b_zero_direct()).abs() <= 4.0 / (1 << n) as f64);
    }
}

#[test]
fn bessel_examples() {
    assert!((mean_diag_evolution(0.0) - 1.0).norm() < 1e-15);
    assert!(mean_diag_evolution(4.8097).norm() <= 1e-3);
    let v = mean_diag_evolution(2.0);
    assert!((v.norm() - 0.7652).abs() < 1e-4);
    assert!((v.arg() + 1.0).abs() < 1e-12);
    assert!((bessel_t_opt() - 4.8097).abs() < 1e-3);
    assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-12);
}

#[test]
fn critical_times_on_small_system() {
    let grid = uniform_grid(0.5, 8.0, 0.02);
    assert_eq!(grid.len(), 376);
    let ct = critical_times(5, &grid).unwrap();
    let (thr, opt) = ct.require_found().unwrap();
    assert!(thr > 1.5 && thr < opt && opt < 6.0, "{thr} {opt}");
    let csv = ct.to_csv();
    assert_eq!(csv.lines().count(), 377);
    assert!(critical_times(5, &[1.0, 1.1, 1.2]).is_err());
    let none = critical_times(5, &uniform_grid(6.0, 6.1, 0.02)).unwrap();
    assert!(none.require_found().is_err());
}

#[test]
fn level_density_approaches_arcsine() {
    let mut rng = RandomSource::new(8);
    let big = level_density_check(8, 100, &mut rng).unwrap();
    assert!(big.ks <= 0.02, "{}", big.ks);
    assert!((big.mean - 0.5).abs() <= 3.0 * big.mean_se);
    let small = level_density_check(4, 1600, &mut rng).unwrap();
    assert_eq!(small.pooled, big.pooled);
    assert!(big.ks < small.ks, "{} vs {}", big.ks, small.ks);
}

#[test]
fn first_entry_follows_beta() {
    let mut rng = RandomSource::new(9);
    for dim in [2, 8, 32] {
        let ks = first_entry_beta_ks(dim, 10_000, &mut rng).unwrap();
        assert!(ks <= 0.03, "dim {dim}: {ks}");
    }
}

#[test]
fn ks_statistic_hand_example() {
    let mut xs = vec![0.5, 0.1];
    // Empirical steps at 0.1 and 0.5 against the uniform CDF.
    assert!((ks_statistic(&mut xs, |x| x) - 0.5).abs() < 1e-15);
}

#[test]
fn diag_evolution_tracks_bessel_bound() {
    let mut rng = RandomSource::new(3);
    let pts = diag_evolution_mc(6, &[0.0, 2.0, 4.8097], 50, &mut rng).unwrap();
    assert!((pts[0].mean_diag_prob - 1.0).abs() < 1e-12);
    assert!((pts[0].mean_p0 - 1.0).abs() < 1e-12);
    for p in &pts {
        assert!(p.jensen_bound <= p.mean_p0 + 1e-12);
        assert!(p.diag_prob_min <= p.mean_diag_prob && p.mean_diag_prob <= p.diag_prob_max);
    }
    assert!((pts[1].jensen_bound - pts[1].bessel_bound).abs() < 0.02);
    assert!(pts[2].mean_p0 < 0.05);
}
