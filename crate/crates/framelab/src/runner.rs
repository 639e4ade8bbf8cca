//! Config-driven command execution behind the `framelab` binary.
//!
//! One command per invocation, reports under the output directory, and a
//! three-way exit contract: 0 when every verification verdict passes, 1 when
//! a verdict fails, 2 on input or usage errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig, SystemConfig};
use crate::fields::{band_estimate_check, check_random_frame, empirical_gramian, RandomFieldModel};
use crate::frames::{
    band_extract_with_eps, maximality_check, parseval_frame, polar_isometry_check,
    verify_frame_bounds,
};
use crate::gramian::{build_gramian, check_carleman, check_psd, check_row_l2, Gramian};
use crate::report::{to_value, write_csv_column, write_csv_matrix, Report};
use crate::rkhs::RkhsKernel;
use crate::rng::SplitMix64;
use crate::spectral::{eig_sym, operator_norm, SymMatrix, DEFAULT_ORTHO_TOL};
use crate::systems::{is_pointwise, VectorSystem};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const COMMANDS: &[&str] = &[
    "gramian",
    "spectrum",
    "band",
    "parseval",
    "isometry",
    "rkhs",
    "hilbert-demo",
    "field-demo",
];

const HILBERT_SWEEP: &[usize] = &[5, 10, 20, 50, 100, 200];
const VERIFY_TRIALS: usize = 100;
const REPRODUCING_TRIALS: usize = 10;

/// Execute `command` under `config`, writing reports and CSVs to `out_dir`.
pub fn run(command: &str, config: &RunConfig, out_dir: &Path) -> Result<Report, RunError> {
    let started = Instant::now();
    let mut report = Report::new(command, to_value(config));
    match command {
        "gramian" => cmd_gramian(config, out_dir, &mut report)?,
        "spectrum" => cmd_spectrum(config, out_dir, &mut report)?,
        "band" => cmd_band(config, out_dir, &mut report)?,
        "parseval" => cmd_parseval(config, &mut report)?,
        "isometry" => cmd_isometry(config, &mut report)?,
        "rkhs" => cmd_rkhs(config, out_dir, &mut report)?,
        "hilbert-demo" => cmd_hilbert_demo(config, out_dir, &mut report)?,
        "field-demo" => cmd_field_demo(config, out_dir, &mut report)?,
        other => {
            return Err(RunError::Usage(format!(
                "unknown subcommand `{other}`; expected one of {}",
                COMMANDS.join(", ")
            )))
        }
    }
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    report.write_to(out_dir)?;
    Ok(report)
}

fn build_checked(config: &RunConfig) -> Result<(VectorSystem, Gramian), RunError> {
    let sys = config.build_system()?;
    if let Some(size) = sys.len() {
        if config.truncation > size {
            return Err(RunError::Usage(format!(
                "truncation {} exceeds the system size {size}",
                config.truncation
            )));
        }
    }
    let g = build_gramian(&sys, config.truncation)
        .map_err(|e| RunError::Usage(format!("building the Gramian failed: {e}")))?;
    Ok((sys, g))
}

fn cmd_gramian(config: &RunConfig, out_dir: &Path, report: &mut Report) -> Result<(), RunError> {
    let (sys, g) = build_checked(config)?;
    let n = config.truncation;
    write_csv_matrix(out_dir, "gramian.csv", &matrix_rows(&g.matrix))?;

    // probe each row at geometrically growing truncations; unbounded
    // systems are probed past the built window to see the tail
    let probes: Vec<usize> = {
        let mut p = vec![n.div_ceil(2), n];
        if sys.len().is_none() {
            p.push(2 * n);
            p.push(4 * n);
        }
        p.dedup();
        if p.len() < 2 {
            p.push(n);
        }
        p
    };
    let row_diags: Result<Vec<_>, _> = (0..n).map(|r| check_row_l2(&sys, r, &probes)).collect();
    let row_diags = row_diags.map_err(|e| RunError::Usage(e.to_string()))?;

    let psd = check_psd(&g, 1e-10).map_err(|e| RunError::Usage(e.to_string()))?;
    let carleman = if n >= 3 {
        Some(check_carleman(&g).map_err(|e| RunError::Usage(e.to_string()))?)
    } else {
        None
    };

    report.verdict("psd", psd.is_psd);
    report.results = json!({
        "system_id": g.system_id,
        "truncation": n,
        "built_rows_l2": g.built_rows_l2,
        "row_l2_diagnostics": to_value(&row_diags),
        "psd": to_value(&psd),
        "carleman": carleman.as_ref().map(to_value),
    });
    Ok(())
}

fn cmd_spectrum(config: &RunConfig, out_dir: &Path, report: &mut Report) -> Result<(), RunError> {
    let (_, g) = build_checked(config)?;
    let d = eig_sym(&g.matrix, DEFAULT_ORTHO_TOL).map_err(|e| RunError::Usage(e.to_string()))?;
    write_csv_column(out_dir, "eigenvalues.csv", d.eigenvalues())?;
    report.verdict("computed", true);
    report.results = json!({
        "system_id": g.system_id,
        "eigenvalues": d.eigenvalues(),
        "operator_norm": operator_norm(&d),
        "lambda_min": d.lambda_min(),
    });
    Ok(())
}

fn cmd_band(config: &RunConfig, out_dir: &Path, report: &mut Report) -> Result<(), RunError> {
    let Some([a, b]) = config.band else {
        return Err(RunError::Usage(
            "the `band` command requires a `band` field".into(),
        ));
    };
    let (_, g) = build_checked(config)?;
    let t = &config.tolerances;
    let band = band_extract_with_eps(&g, a, b, t.rank_tol, t.band_eps)
        .map_err(|e| RunError::Usage(e.to_string()))?;
    let bounds = verify_frame_bounds(&g, &band, VERIFY_TRIALS, config.seed, t.verify_tol);
    let maximality = maximality_check(&g, &band, t.verify_tol);
    if !band.onb.is_empty() {
        write_csv_matrix(out_dir, "band_onb.csv", &band.onb)?;
    }
    report.verdict("frame_bounds", bounds.pass);
    report.verdict("maximality", maximality.confirmed);
    report.results = json!({
        "system_id": g.system_id,
        "band": [a, b],
        "dimension": band.dim(),
        "attained": band.attained,
        "endpoint_sensitive": band.endpoint_sensitive,
        "endpoint_tolerance_applied": band.endpoint_tolerance_applied,
        "bounds_check": to_value(&bounds),
        "maximality": to_value(&maximality),
    });
    Ok(())
}

fn cmd_parseval(config: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let (sys, g) = build_checked(config)?;
    let t = &config.tolerances;
    match parseval_frame(&sys, &g, t.rank_tol) {
        Ok(p) => {
            let mut max_dev = 0.0f64;
            let mut executed = 0usize;
            for trial in 0..VERIFY_TRIALS {
                let mut rng = SplitMix64::derive(config.seed, trial as u64);
                let xi = rng.normal_vec(g.n);
                if g.matrix.quad_form(&xi) <= 0.0 {
                    continue;
                }
                let q = p.parseval_quotient(&g, &xi);
                max_dev = max_dev.max((q - 1.0).abs());
                executed += 1;
            }
            let pass = max_dev <= t.verify_tol;
            report.verdict("parseval", pass);
            report.results = json!({
                "system_id": g.system_id,
                "trials": executed,
                "max_quotient_deviation": max_dev,
                "dropped_eigenvalues": p.dropped,
                "lambda_min_retained": p.lambda_min_retained,
                "tol": t.verify_tol,
            });
        }
        Err(e) => {
            report.verdict("parseval", false);
            report.results = json!({
                "system_id": g.system_id,
                "error": e.to_string(),
            });
        }
    }
    Ok(())
}

fn cmd_isometry(config: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let (_, g) = build_checked(config)?;
    let t = &config.tolerances;
    match polar_isometry_check(&g, VERIFY_TRIALS, config.seed, t.verify_tol) {
        Ok(r) => {
            report.verdict("isometry", r.pass);
            report.verdict("kernel_trivial", r.kernel_trivial);
            report.results = json!({
                "system_id": g.system_id,
                "check": to_value(&r),
            });
        }
        Err(e) => {
            report.verdict("isometry", false);
            report.results = json!({ "system_id": g.system_id, "error": e.to_string() });
        }
    }
    Ok(())
}

fn evaluation_points(sys: &VectorSystem) -> Result<Vec<f64>, RunError> {
    match sys {
        VectorSystem::SampledFunctions { grid, .. } => Ok(grid.clone()),
        VectorSystem::ExplicitFinite { coordinates } => {
            Ok((0..coordinates[0].len()).map(|k| k as f64).collect())
        }
        VectorSystem::HilbertMonomial => Ok((1..=21).map(|i| i as f64 / 22.0).collect()),
        _ => Err(RunError::Usage(format!(
            "the `rkhs` command needs a pointwise system, got kind `{}`",
            sys.kind_name()
        ))),
    }
}

fn cmd_rkhs(config: &RunConfig, out_dir: &Path, report: &mut Report) -> Result<(), RunError> {
    let sys = config.build_system()?;
    if !is_pointwise(&sys) {
        return Err(RunError::Usage(format!(
            "the `rkhs` command needs a pointwise system, got kind `{}`",
            sys.kind_name()
        )));
    }
    if let Some(size) = sys.len() {
        if config.truncation > size {
            return Err(RunError::Usage(format!(
                "truncation {} exceeds the system size {size}",
                config.truncation
            )));
        }
    }
    let t = &config.tolerances;
    let k = RkhsKernel::build(&sys, config.truncation, t.rank_tol)
        .map_err(|e| RunError::Usage(e.to_string()))?;
    let points = evaluation_points(&sys)?;
    let km = k
        .matrix(&points)
        .map_err(|e| RunError::Usage(e.to_string()))?;
    write_csv_matrix(out_dir, "kernel_matrix.csv", &matrix_rows(&km))?;
    let kd = eig_sym(&km, DEFAULT_ORTHO_TOL).map_err(|e| RunError::Usage(e.to_string()))?;
    let kernel_psd = kd.lambda_min() >= -1e-10 * kd.lambda_max_abs();

    let mut worst: Option<Value> = None;
    let mut all_pass = true;
    let mut max_residual = 0.0f64;
    for trial in 0..REPRODUCING_TRIALS {
        let mut rng = SplitMix64::derive(config.seed, trial as u64);
        let xi = rng.normal_vec(config.truncation);
        let r = k
            .reproducing_check(&xi, &points, t.verify_tol)
            .map_err(|e| RunError::Usage(e.to_string()))?;
        all_pass &= r.pass;
        if r.max_residual >= max_residual {
            max_residual = r.max_residual;
            worst = Some(json!({
                "max_residual": r.max_residual,
                "f_norm": r.f_norm,
                "pass": r.pass,
            }));
        }
    }
    report.verdict("kernel_psd", kernel_psd);
    report.verdict("reproducing", all_pass);
    report.results = json!({
        "system_id": k.gramian.system_id,
        "points": points,
        "kernel_min_eigenvalue": kd.lambda_min(),
        "trials": REPRODUCING_TRIALS,
        "worst_trial": worst,
        "tol": t.verify_tol,
    });
    Ok(())
}

fn cmd_hilbert_demo(
    config: &RunConfig,
    out_dir: &Path,
    report: &mut Report,
) -> Result<(), RunError> {
    if !matches!(config.system, SystemConfig::Hilbert) {
        return Err(RunError::Usage(
            "the `hilbert-demo` command requires `system.kind` = \"hilbert\"".into(),
        ));
    }
    let sys = VectorSystem::hilbert_monomial();
    let points: Vec<f64> = (1..=19).map(|i| i as f64 / 20.0).collect();
    let reproducing_tol = 1e-8;

    let mut rows = Vec::new();
    let mut norms = Vec::new();
    let mut lambda_min_10 = f64::NAN;
    let mut reproducing_pass: BTreeMap<usize, bool> = BTreeMap::new();
    for &n in HILBERT_SWEEP {
        let g = build_gramian(&sys, n).map_err(|e| RunError::Usage(e.to_string()))?;
        let d =
            eig_sym(&g.matrix, DEFAULT_ORTHO_TOL).map_err(|e| RunError::Usage(e.to_string()))?;
        let norm = operator_norm(&d);
        norms.push(norm);
        if n == 10 {
            lambda_min_10 = d.lambda_min();
        }
        let k = RkhsKernel::build(&sys, n, config.tolerances.rank_tol)
            .map_err(|e| RunError::Usage(e.to_string()))?;
        let mut max_residual = 0.0f64;
        let mut pass = true;
        for trial in 0..REPRODUCING_TRIALS {
            let mut rng = SplitMix64::derive(config.seed, (n * 1000 + trial) as u64);
            let xi = rng.normal_vec(n);
            let r = k
                .reproducing_check(&xi, &points, reproducing_tol)
                .map_err(|e| RunError::Usage(e.to_string()))?;
            max_residual = max_residual.max(r.max_residual);
            pass &= r.pass;
        }
        reproducing_pass.insert(n, pass);
        rows.push(vec![n as f64, norm, d.lambda_min(), max_residual]);
    }
    write_csv_matrix(out_dir, "hilbert_sweep.csv", &rows)?;

    let strictly_increasing = norms.windows(2).all(|w| w[0] < w[1]);
    let below_pi = norms.iter().all(|&v| v < std::f64::consts::PI);
    let norm_200 = *norms.last().expect("sweep is nonempty");
    // independent second path for the largest truncation
    let g200 = build_gramian(&sys, 200).map_err(|e| RunError::Usage(e.to_string()))?;
    let power_norm = power_iteration_norm(&g200.matrix, config.seed);
    let failure_from_12 = reproducing_pass
        .iter()
        .filter(|(n, _)| **n >= 12)
        .all(|(_, p)| !p);

    report.verdict("norms_strictly_increasing", strictly_increasing);
    report.verdict("norms_below_pi", below_pi);
    report.verdict("lambda_min_g10_below_1e-12", lambda_min_10 < 1e-12);
    report.verdict(
        "power_iteration_agrees",
        (power_norm - norm_200).abs() <= 1e-6 * norm_200,
    );
    report.verdict("reproducing_fails_from_n12", failure_from_12);
    report.results = json!({
        "sweep": HILBERT_SWEEP,
        "operator_norms": norms,
        "pi": std::f64::consts::PI,
        "lambda_min_g10": lambda_min_10,
        "power_iteration_norm_200": power_norm,
        "reproducing_pass_by_n": reproducing_pass,
        "reproducing_tol": reproducing_tol,
    });
    Ok(())
}

fn cmd_field_demo(config: &RunConfig, out_dir: &Path, report: &mut Report) -> Result<(), RunError> {
    let SystemConfig::Covariance { .. } = &config.system else {
        return Err(RunError::Usage(
            "the `field-demo` command requires `system.kind` = \"covariance\"".into(),
        ));
    };
    let sys = config.build_system()?;
    let VectorSystem::CovarianceField { covariance } = &sys else {
        unreachable!()
    };
    let c = covariance;

    let diag = check_random_frame(c).map_err(|e| RunError::Usage(e.to_string()))?;
    report.verdict("psd", diag.is_psd);
    if !diag.is_psd {
        report.results = json!({ "diagnostic": to_value(&diag) });
        return Ok(());
    }
    let model = RandomFieldModel::new(c.clone(), config.seed)
        .map_err(|e| RunError::Usage(e.to_string()))?;

    // empirical Gramian error curve: median over 10 derived seeds
    let sample_sizes = [100usize, 1000, 10_000];
    let mut medians = Vec::new();
    for (si, &m) in sample_sizes.iter().enumerate() {
        let mut errs: Vec<f64> = (0..10)
            .map(|s| {
                let seeded =
                    RandomFieldModel::new(c.clone(), config.seed ^ ((si * 10 + s) as u64 + 1))
                        .expect("psd verified");
                frobenius_distance(&empirical_gramian(&seeded.sample(m)), c)
            })
            .collect();
        errs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        medians.push(0.5 * (errs[4] + errs[5]));
    }
    let error_curve_monotone = medians.windows(2).all(|w| w[1] <= w[0]);
    write_csv_matrix(
        out_dir,
        "empirical_error.csv",
        &sample_sizes
            .iter()
            .zip(&medians)
            .map(|(&m, &e)| vec![m as f64, e])
            .collect::<Vec<_>>(),
    )?;

    // band estimate on covariance eigenvectors; a zero covariance has no
    // positive spectrum to band
    let d = model.decomposition();
    let lam_max = d.lambda_max_abs();
    let (a, b) = match config.band {
        Some([a, b]) => (a, b),
        None if lam_max > 0.0 => (0.5 * lam_max, lam_max),
        None => (1.0, 1.0),
    };
    let eps = config.tolerances.band_eps * lam_max;
    let c_vectors: Vec<Vec<f64>> = d
        .eigenpairs()
        .filter(|(lam, _)| *lam >= a - eps && *lam <= b + eps)
        .map(|(_, v)| v.to_vec())
        .collect();
    let band_report = if c_vectors.is_empty() {
        None
    } else {
        Some(
            band_estimate_check(c, a, b, &c_vectors, 1e-10)
                .map_err(|e| RunError::Usage(e.to_string()))?,
        )
    };
    let band_pass = band_report.as_ref().map(|r| r.pass).unwrap_or(true);

    // Monte Carlo cross-check of both sides of the estimate through the
    // empirical Gramian
    let m_mc = 10_000usize;
    let c_hat = empirical_gramian(&model.sample(m_mc));
    let mc_rel_tol = 0.25;
    let mut mc_pass = true;
    let mut mc_items = Vec::new();
    for cv in c_vectors.iter().take(4) {
        let exact_sm = c.quad_form(cv);
        let exact_fs = {
            let cc = c.apply(cv);
            cc.iter().map(|v| v * v).sum::<f64>()
        };
        let emp_sm = c_hat.quad_form(cv);
        let emp_fs = {
            let cc = c_hat.apply(cv);
            cc.iter().map(|v| v * v).sum::<f64>()
        };
        let ok_sm = (emp_sm - exact_sm).abs() <= mc_rel_tol * exact_sm.max(1e-12);
        let ok_fs = (emp_fs - exact_fs).abs() <= mc_rel_tol * exact_fs.max(1e-12);
        mc_pass &= ok_sm && ok_fs;
        mc_items.push(json!({
            "second_moment": { "exact": exact_sm, "empirical": emp_sm },
            "frame_sum": { "exact": exact_fs, "empirical": emp_fs },
        }));
    }

    report.verdict("band_estimate", band_pass);
    report.verdict("empirical_error_nonincreasing", error_curve_monotone);
    report.verdict("monte_carlo_cross_check", mc_pass);
    report.results = json!({
        "diagnostic": to_value(&diag),
        "sample_sizes": sample_sizes,
        "empirical_error_medians": medians,
        "band": [a, b],
        "band_vectors": c_vectors.len(),
        "band_estimate": band_report.as_ref().map(to_value),
        "monte_carlo": { "samples": m_mc, "rel_tol": mc_rel_tol, "items": mc_items },
    });
    Ok(())
}

fn matrix_rows(m: &SymMatrix) -> Vec<Vec<f64>> {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}

fn frobenius_distance(a: &SymMatrix, b: &SymMatrix) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    let mut s = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let d = a.at(i, j) - b.at(i, j);
            s += d * d;
        }
    }
    s.sqrt()
}

/// Dominant eigenvalue of a PSD matrix by plain power iteration: an
/// implementation path independent of the Jacobi solver.
pub fn power_iteration_norm(m: &SymMatrix, seed: u64) -> f64 {
    let n = m.dim();
    let mut rng = SplitMix64::derive(seed, 0xA11CE);
    let mut v = rng.normal_vec(n);
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= nrm;
    }
    let mut rayleigh = 0.0f64;
    for _ in 0..5000 {
        let w = m.apply(&v);
        let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nw == 0.0 {
            return 0.0;
        }
        let next: Vec<f64> = w.iter().map(|x| x / nw).collect();
        let r = {
            let mv = m.apply(&next);
            next.iter().zip(&mv).map(|(a, b)| a * b).sum::<f64>()
        };
        let done = (r - rayleigh).abs() <= 1e-14 * r.abs().max(1.0);
        v = next;
        rayleigh = r;
        if done {
            break;
        }
    }
    rayleigh
}

/// Entry point behind the binary: parse args, run, write the report, and
/// map the outcome onto the exit-code contract.
pub fn main_with_args(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(report) => {
            for (name, pass) in &report.verdicts {
                println!("{}: {}", name, if *pass { "pass" } else { "FAIL" });
            }
            if report.all_pass() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!(
                "usage: framelab <{}> --config <path> [--out <dir>] [--seed <u64>]",
                COMMANDS.join("|")
            );
            2
        }
    }
}

fn dispatch(args: &[String]) -> Result<Report, RunError> {
    let mut it = args.iter();
    let command = it
        .next()
        .ok_or_else(|| RunError::Usage("missing subcommand".into()))?;
    if !COMMANDS.contains(&command.as_str()) {
        return Err(RunError::Usage(format!("unknown subcommand `{command}`")));
    }
    let mut config_path: Option<PathBuf> = None;
    let mut out_override: Option<PathBuf> = None;
    let mut seed_override: Option<u64> = None;
    while let Some(flag) = it.next() {
        match flag.as_str() {
            "--config" => {
                let v = it
                    .next()
                    .ok_or_else(|| RunError::Usage("--config needs a path".into()))?;
                config_path = Some(PathBuf::from(v));
            }
            "--out" => {
                let v = it
                    .next()
                    .ok_or_else(|| RunError::Usage("--out needs a path".into()))?;
                out_override = Some(PathBuf::from(v));
            }
            "--seed" => {
                let v = it
                    .next()
                    .ok_or_else(|| RunError::Usage("--seed needs a value".into()))?;
                seed_override = Some(
                    v.parse::<u64>()
                        .map_err(|_| RunError::Usage(format!("--seed `{v}` is not a u64")))?,
                );
            }
            other => return Err(RunError::Usage(format!("unknown flag `{other}`"))),
        }
    }
    let config_path =
        config_path.ok_or_else(|| RunError::Usage("missing required --config <path>".into()))?;
    let text = std::fs::read_to_string(&config_path).map_err(|e| {
        RunError::Usage(format!("cannot read config {}: {e}", config_path.display()))
    })?;
    let mut config = RunConfig::from_json_str(&text)?;
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    let out_dir = out_override
        .or_else(|| config.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    run(command, &config, &out_dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hilbert_config(n: usize) -> RunConfig {
        RunConfig::from_json_str(&format!(
            r#"{{"system": {{"kind": "hilbert"}}, "truncation": {n}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn spectrum_on_hilbert() {
        let dir = std::env::temp_dir().join("framelab_test_spectrum");
        let report = run("spectrum", &hilbert_config(5), &dir).unwrap();
        assert!(report.all_pass());
        let norm = report.results["operator_norm"].as_f64().unwrap();
        assert!(norm > 1.5 && norm < std::f64::consts::PI);
        assert!(dir.join("eigenvalues.csv").exists());
        assert!(dir.join("report.json").exists());
    }

    #[test]
    fn band_requires_band_field() {
        let dir = std::env::temp_dir().join("framelab_test_band_missing");
        match run("band", &hilbert_config(5), &dir) {
            Err(RunError::Usage(msg)) => assert!(msg.contains("band")),
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_command_rejected() {
        let dir = std::env::temp_dir().join("framelab_test_unknown");
        assert!(matches!(
            run("mystery", &hilbert_config(3), &dir),
            Err(RunError::Usage(_))
        ));
    }

    #[test]
    fn truncation_beyond_system_size_is_usage_error() {
        let cfg = RunConfig::from_json_str(
            r#"{"system": {"kind": "explicit", "vectors": [[1,0],[0,1]]}, "truncation": 5}"#,
        )
        .unwrap();
        let dir = std::env::temp_dir().join("framelab_test_trunc");
        assert!(matches!(
            run("gramian", &cfg, &dir),
            Err(RunError::Usage(_))
        ));
    }

    #[test]
    fn power_iteration_matches_closed_form() {
        let m = SymMatrix::from_rows(&[vec![1.5, 0.5], vec![0.5, 1.5]]);
        let norm = power_iteration_norm(&m, 1);
        assert!((norm - 2.0).abs() < 1e-10, "{norm}");
    }
}
