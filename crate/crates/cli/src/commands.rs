use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use hsbench_core::analytics::{critical_times, diag_evolution_mc, expected_bitstring_moments, uniform_grid};
use hsbench_core::circuit::{make_coupling, sample_column_stats};
use hsbench_core::metrics::supremacy_params;
use hsbench_core::qsp::{solve_phases, sup_error, PhaseFactorSequence, SolveOptions};
use hsbench_core::RandomSource;

use crate::config::{
    load, BenchmarkConfig, HaarConvergenceConfig, QuesConfig, SolvePhasesConfig, SupremacyConfig, ToptMcConfig,
    VerifyPhasesConfig,
};
use crate::manifest::Run;
use crate::pipeline::{FidelitySweep, SweepCell};
use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    SolvePhases,
    VerifyPhases,
    Ques,
    Benchmark,
    HaarConvergence,
    Supremacy,
    ToptMc,
}

/// Load the config, run the command and write its artifacts and manifest.
/// Returns the manifest path.
pub fn run(command: Command, config: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<PathBuf, Failure> {
    match command {
        Command::SolvePhases => solve(config, seed, out),
        Command::VerifyPhases => verify(config, seed, out),
        Command::Ques => ques_grid(config, seed, out),
        Command::Benchmark => benchmark(config, seed, out),
        Command::HaarConvergence => haar_convergence(config, seed, out),
        Command::Supremacy => supremacy(config, seed, out),
        Command::ToptMc => topt_mc(config, seed, out),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::Other(e.to_string()))
}

fn solve(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let loaded = load::<SolvePhasesConfig>(path, seed, out)?;
    let c = loaded.config;
    let mut run = Run::start("solve-phases", &c, loaded.out)?;
    let seq = run.stage("solve", || {
        let opts = SolveOptions {
            tol: c.tol,
            max_restarts: c.max_restarts,
            seed: c.seed,
            ..Default::default()
        };
        Ok(solve_phases(c.t, c.degree, &opts)?)
    })?;
    let text = seq.to_json()?;
    // The phase file format ignores unknown fields, so the digest rides along.
    let text = text.replacen('{', &format!("{{\n  \"manifest_digest\": \"{}\",", run.digest()), 1);
    run.write_raw("phases.json", &text)?;
    run.finish()
}

fn verify(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let loaded = load::<VerifyPhasesConfig>(path, seed, out)?;
    let c = loaded.config;
    let mut run = Run::start("verify-phases", &c, loaded.out)?;
    let text = std::fs::read_to_string(&c.phase_file)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", c.phase_file.display())))?;
    let seq = PhaseFactorSequence::from_json(&text)?;
    let measured = run.stage("verify", || Ok(sup_error(&seq.qsp_phases()?, seq.t)))?;
    let relative = c.reference_sup_error.map(|r| (measured - r).abs() / r);
    let within = match (relative, c.rel_tol) {
        (Some(rel), Some(tol)) => Some(rel <= tol),
        _ => None,
    };
    let report = json!({
        "t": seq.t,
        "degree": seq.degree(),
        "convention": seq.convention,
        "sup_error": measured,
        "stored_sup_error": (!seq.sup_error.is_nan()).then_some(seq.sup_error),
        "reference_sup_error": c.reference_sup_error,
        "relative_deviation": relative,
        "within_tolerance": within,
    });
    run.write_json("verify_report.json", report)?;
    run.finish()
}

fn ques_grid(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let loaded = load::<QuesConfig>(path, seed, out)?;
    let c = loaded.config;
    let mut run = Run::start("ques", &c, loaded.out)?;
    let sweeps: Vec<FidelitySweep> = c
        .n
        .iter()
        .map(|&n| FidelitySweep {
            n,
            t: c.t,
            degrees: c.degrees.clone(),
            r2: vec![c.r2],
            coupling: c.coupling.kind(n + 1),
            depth: c.depth,
            instances: c.instances,
            shots: c.shots,
            seed: c.seed,
            phase_tol: c.phase_tol,
            max_restarts: c.max_restarts,
        })
        .collect();
    for s in &sweeps {
        s.validate()?;
    }
    let mut rows: Vec<(usize, Vec<SweepCell>)> = Vec::new();
    for s in &sweeps {
        let cells = run.stage(&format!("sweep n={}", s.n), || Ok(s.run(None)?))?;
        rows.push((s.n, cells));
    }

    let mut heat = String::from("n");
    for d in &c.degrees {
        let _ = write!(heat, ",2d={d}");
    }
    heat.push('\n');
    let mut long = String::from("n,degree,eps,ques,ci95,bootstrap_ci95,alpha,alpha_lower,alpha_upper\n");
    let mut cells_json = Vec::new();
    for (n, cells) in &rows {
        let _ = write!(heat, "{n}");
        for cell in cells {
            let _ = write!(heat, ",{}", cell.ques.mean);
            let (alpha, _) = cell.ques.alpha();
            let (lo, hi) = cell.bounds.map_or((f64::NAN, f64::NAN), |b| (b.lower, b.upper));
            let _ = writeln!(
                long,
                "{n},{},{},{},{},{},{alpha},{lo},{hi}",
                cell.degree, cell.eps, cell.ques.mean, cell.ques.ci95, cell.ques_bootstrap_ci95
            );
            cells_json.push(json!({
                "n": n,
                "degree": cell.degree,
                "eps": cell.eps,
                "ques_report": to_value(&cell.ques)?,
                "ques_bootstrap_ci95": cell.ques_bootstrap_ci95,
                "alpha": alpha,
                "bounds": to_value(&cell.bounds)?,
            }));
        }
        heat.push('\n');
    }
    run.write_json("ques_report.json", json!({ "cells": cells_json }))?;
    let meta = [("t", c.t.to_string()), ("shots", c.shots.to_string()), ("instances", c.instances.to_string())];
    run.write_csv("ques_heatmap.csv", &meta, &heat)?;
    run.write_csv("ques_cells.csv", &meta, &long)?;
    run.finish()
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), |v| format!("{v:.4}"))
}

fn benchmark(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let loaded = load::<BenchmarkConfig>(path, seed, out)?;
    let c = loaded.config;
    let mut run = Run::start("benchmark", &c, loaded.out)?;
    let sweep = FidelitySweep {
        n: c.n,
        t: c.t,
        degrees: c.degrees.clone(),
        r2: c.r2.clone(),
        coupling: c.coupling.kind(c.n + 1),
        depth: c.depth,
        instances: c.instances,
        shots: c.shots,
        seed: c.seed,
        phase_tol: c.phase_tol,
        max_restarts: c.max_restarts,
    };
    sweep.validate()?;
    let moments = run.stage("haar moments", || Ok(expected_bitstring_moments(c.t, 1 << c.n)?))?;
    let cells = run.stage("sweep", || Ok(sweep.run(Some(&moments))?))?;
    let params = supremacy_params(moments.h1, moments.h2, c.n);

    let mut table = String::from("r2,estimator");
    for d in &c.degrees {
        let _ = write!(table, ",2d={d}");
    }
    table.push('\n');
    let mut json_cells = Vec::new();
    let mut b_at_alpha = Vec::new();
    for (j, r2) in c.r2.iter().enumerate() {
        let row: Vec<&SweepCell> = (0..c.degrees.len()).map(|di| &cells[di * c.r2.len() + j]).collect();
        let lines: [(&str, Box<dyn Fn(&SweepCell) -> Option<f64>>); 4] = [
            ("ques", Box::new(|x| Some(x.ques.alpha().0))),
            ("sxes", Box::new(|x| x.sxes.map(|s| s.raw))),
            ("sxes_analytic", Box::new(|x| x.sxes_analytic.map(|s| s.raw))),
            ("ref", Box::new(|x| Some(x.alpha_ref))),
        ];
        for (name, f) in &lines {
            let _ = write!(table, "{r2},{name}");
            for cell in &row {
                let _ = write!(table, ",{}", fmt_opt(f(cell)));
            }
            table.push('\n');
        }
        for cell in row {
            let alpha = cell.ques.alpha().0;
            b_at_alpha.push(json!({ "degree": cell.degree, "r2": r2, "alpha": alpha, "b": params.b(alpha) }));
            json_cells.push(json!({
                "degree": cell.degree,
                "r2": r2,
                "eps": cell.eps,
                "ques_report": to_value(&cell.ques)?,
                "fidelity": {
                    "ques": alpha,
                    "ques_ci95": cell.ques.alpha().1,
                    "ques_bootstrap_ci95": 2.0 * cell.ques_bootstrap_ci95,
                    "sxes": cell.sxes.map(|s| s.raw),
                    "sxes_se": cell.sxes.map(|s| s.std_error),
                    "sxes_analytic": cell.sxes_analytic.map(|s| s.raw),
                    "mean_sxes": cell.mean_sxes,
                    "mean_sxes_se": cell.sxes_se,
                    "ref": cell.alpha_ref,
                    "bounds": to_value(&cell.bounds)?,
                },
            }));
        }
    }
    let report = json!({
        "cells": json_cells,
        "supremacy": {
            "t": c.t,
            "H1": params.h1,
            "H2": params.h2,
            "gamma": params.gamma,
            "alpha_star": params.alpha_star,
            "b_at_alpha": b_at_alpha,
        },
    });
    run.write_json("benchmark.json", report)?;
    let meta = [
        ("n", c.n.to_string()),
        ("t", c.t.to_string()),
        ("depth", c.depth.to_string()),
        ("coupling", c.coupling.name().to_string()),
        ("instances", c.instances.to_string()),
        ("shots", c.shots.to_string()),
    ];
    run.write_csv("benchmark_table.csv", &meta, &table)?;
    run.finish()
}

fn haar_convergence(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let loaded = load::<HaarConvergenceConfig>(path, seed, out)?;
    let c = loaded.config;
    let mut run = Run::start("haar-convergence", &c, loaded.out)?;
    let master = RandomSource::new(c.seed);
    let mut csv = String::from("coupling,depth,instances,entropy_ratio,entropy_se");
    for k in 1..=c.k_max {
        let _ = write!(csv, ",m{k}_ratio,m{k}_se");
    }
    csv.push_str(",max_deviation\n");
    for (ci, coupling) in c.couplings.iter().enumerate() {
        let map = make_coupling(coupling.kind(c.qubits), c.qubits)?;
        for (di, &depth) in c.depths.iter().enumerate() {
            let rng = master.split(((ci as u64) << 32) | di as u64);
            let stats = run.stage(&format!("{} depth={depth}", coupling.name()), || {
                Ok(sample_column_stats(&map, depth, c.instances, c.k_max, &rng)?)
            })?;
            let _ = write!(
                csv,
                "{},{depth},{},{},{}",
                coupling.name(),
                stats.instances,
                stats.entropy_ratio,
                stats.entropy_ratio_se
            );
            let mut worst = stats.entropy_deviation();
            for (m, se) in stats.moment_ratios.iter().zip(&stats.moment_ratio_se) {
                let _ = write!(csv, ",{m},{se}");
                worst = worst.max((m - 1.0).abs());
            }
            let _ = writeln!(csv, ",{worst}");
        }
    }
    run.write_csv("haar_convergence.csv", &[("qubits", c.qubits.to_string())], &csv)?;
    run.finish()
}

fn supremacy(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let loaded = load::<SupremacyConfig>(path, seed, out)?;
    let c = loaded.config;
    let mut run = Run::start("supremacy", &c, loaded.out)?;
    let grid = uniform_grid(c.t_min, c.t_max, c.t_step);
    let times = run.stage("critical times", || Ok(critical_times(c.n, &grid)?))?;

    let mut b_csv = String::from("t");
    for a in &c.alphas {
        let _ = write!(b_csv, ",b({a})");
    }
    b_csv.push('\n');
    for p in &times.curve {
        let params = supremacy_params(p.h1, p.h2, c.n);
        let _ = write!(b_csv, "{}", p.t);
        for &a in &c.alphas {
            let _ = write!(b_csv, ",{}", params.b(a));
        }
        b_csv.push('\n');
    }
    let at_opt = times.t_opt.map(|t| {
        let i = times
            .curve
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.t - t).abs().total_cmp(&(b.1.t - t).abs()))
            .map_or(0, |(i, _)| i);
        let p = times.curve[i];
        let params = supremacy_params(p.h1, p.h2, c.n);
        json!({
            "t": p.t,
            "H1": p.h1,
            "H2": p.h2,
            "gamma": p.gamma,
            "alpha_star": params.alpha_star,
            "b_at_alpha": c.alphas.iter().map(|&a| json!({ "alpha": a, "b": params.b(a) })).collect::<Vec<_>>(),
        })
    });
    let summary = json!({
        "n": c.n,
        "t_thr": times.t_thr,
        "t_opt": times.t_opt,
        "alpha_star_at_opt": times.alpha_star_at_opt,
        "gamma_at_opt": times.gamma_at_opt,
        "bessel_t_opt": times.bessel_t_opt,
        "supremacy": at_opt,
    });
    let meta = [
        ("n", c.n.to_string()),
        ("D", (1u64 << c.n).to_string()),
        ("coeff_tol", hsbench_core::analytics::DEFAULT_COEFF_TOL.to_string()),
        ("t_step", c.t_step.to_string()),
    ];
    run.write_csv("supremacy_curve.csv", &meta, &times.to_csv())?;
    run.write_csv("supremacy_b.csv", &meta, &b_csv)?;
    run.write_json("supremacy.json", summary)?;
    run.finish()
}

fn topt_mc(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let loaded = load::<ToptMcConfig>(path, seed, out)?;
    let c = loaded.config;
    let mut run = Run::start("topt-mc", &c, loaded.out)?;
    let grid = uniform_grid(c.t_min, c.t_max, c.t_step);
    let points = run.stage("monte carlo", || {
        Ok(diag_evolution_mc(c.n, &grid, c.samples, &mut RandomSource::new(c.seed))?)
    })?;
    let mut csv = String::from("t,mean_diag_prob,diag_prob_min,diag_prob_max,mean_p0,p0_se,jensen_bound,bessel_bound\n");
    for p in &points {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            p.t, p.mean_diag_prob, p.diag_prob_min, p.diag_prob_max, p.mean_p0, p.p0_se, p.jensen_bound, p.bessel_bound
        );
    }
    let meta = [("n", c.n.to_string()), ("samples", c.samples.to_string())];
    run.write_csv("topt_mc.csv", &meta, &csv)?;
    run.finish()
}
