//! Batch command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 statistical
//! comparison failure (some `|z|` above the threshold).

mod config;

pub use config::{EstimatorKind, RunConfig};

use crate::analytic;
use crate::error::{Error, Result};
use crate::estimate::{
    self, format_number, reports_to_csv, reports_to_json, round_sig, CovDerivOptions, EstimateReport,
    McConfig,
};
use crate::euclid::{CrossSection, Vec3};
use crate::model::ProcessSpec;
use crate::optimize::{solve_radius_law, verify_solution, DesignProblem};
use crate::sim::{sample_realization, Window};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "cylproc", version, about = "Poisson cylinder process analytics and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for replicate-parallel estimation.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Directory for output files; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest accepted |z| in `compare`.
    #[arg(long = "z-threshold", global = true, default_value_t = 4.0)]
    z_threshold: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate closed-form characteristics.
    Analytic,
    /// Run Monte Carlo estimators.
    Estimate,
    /// Run estimators and test them against the closed forms.
    Compare,
    /// Sample one realization and write it as CSV.
    Simulate,
    /// Solve the radius-law design problem.
    Optimize,
}

/// Output of a command: named files (or stdout blocks) and an exit code.
struct Outcome {
    files: Vec<(String, String)>,
    code: i32,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => match emit(&outcome, cli.common.out.as_deref()) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn emit(outcome: &Outcome, out: Option<&Path>) -> Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, body) in &outcome.files {
                std::fs::write(dir.join(name), body)?;
            }
        }
        None => {
            for (name, body) in &outcome.files {
                if name.ends_with(".json") || outcome.files.len() == 1 {
                    print!("{body}");
                }
            }
        }
    }
    Ok(())
}

fn load_config(common: &Common) -> Result<RunConfig> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::arg("--config PATH is required"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::arg(format!("cannot read config {}: {e}", path.display())))?;
    RunConfig::from_json(&text)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = load_config(&cli.common)?;
    let seed = cli.common.seed.or(cfg.seed).unwrap_or(0);
    let workers = cli.common.workers.or(cfg.workers).unwrap_or(1);
    match cli.command {
        Command::Analytic => cmd_analytic(&cfg),
        Command::Estimate => {
            let reports = run_estimators(&cfg, seed, workers)?;
            Ok(Outcome {
                files: vec![
                    ("estimate.json".into(), to_json_text(&reports_to_json(&reports))),
                    ("estimate.csv".into(), reports_to_csv(&reports)),
                ],
                code: 0,
            })
        }
        Command::Compare => cmd_compare(&cfg, seed, workers, cli.common.z_threshold),
        Command::Simulate => {
            let spec = cfg.process()?;
            let window = cfg.window()?;
            let real = sample_realization(&spec, &window, seed)?;
            Ok(Outcome {
                files: vec![("realization.csv".into(), real.to_csv_string())],
                code: 0,
            })
        }
        Command::Optimize => cmd_optimize(&cfg, seed),
    }
}

/// Pretty JSON with a trailing newline, all floats at 12 significant digits.
fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_json(v)).expect("json");
    s.push('\n');
    s
}

fn round_json(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64"));
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, x)| (k.clone(), round_json(x))).collect()),
        other => other.clone(),
    }
}

fn coords(v: &Vec3, dim: usize) -> Vec<f64> {
    v.as_slice()[..dim].to_vec()
}

fn cmd_analytic(cfg: &RunConfig) -> Result<Outcome> {
    let spec = cfg.process()?;
    let d = spec.dim();
    let mut rows: Vec<(String, String, f64)> = Vec::new();
    let p = analytic::volume_fraction(&spec);
    let sv = analytic::specific_surface(&spec);
    rows.push(("volume_fraction".into(), String::new(), p));
    rows.push(("specific_surface".into(), String::new(), sv));
    rows.push(("mean_base_area".into(), String::new(), spec.mean_base_area()));
    rows.push(("mean_base_perimeter".into(), String::new(), spec.mean_base_perimeter()));
    let mut doc = json!({
        "volume_fraction": p,
        "specific_surface": sv,
        "mean_base_area": spec.mean_base_area(),
        "mean_base_perimeter": spec.mean_base_perimeter(),
    });
    let lags = cfg.lags(d)?;
    if !lags.is_empty() {
        let mut arr = Vec::new();
        for h in &lags {
            let c = analytic::covariance(&spec, h);
            arr.push(json!({"h": coords(h, d), "value": c}));
            rows.push(("covariance".into(), vec_label(h, d), c));
        }
        doc["covariance"] = Value::Array(arr);
    }
    if let Some(radii) = &cfg.radii {
        let mut arr = Vec::new();
        for &r in radii {
            let v = analytic::spherical_cdf(&spec, r);
            arr.push(json!({"r": r, "value": v}));
            rows.push(("spherical_cdf".into(), format_number(r), v));
        }
        doc["spherical_cdf"] = Value::Array(arr);
    }
    if let Some(eta) = cfg.eta(d)? {
        let radii = cfg.linear_radii.as_ref().or(cfg.radii.as_ref()).cloned().unwrap_or_default();
        let mut arr = Vec::new();
        for r in radii {
            let v = analytic::linear_cdf(&spec, &eta, r)?;
            arr.push(json!({"r": r, "value": v}));
            rows.push(("linear_cdf".into(), format_number(r), v));
        }
        doc["linear_cdf"] = json!({"eta": eta.coords(), "values": arr});
    }
    let discs = spec
        .components()
        .iter()
        .all(|(k, _)| matches!(k, CrossSection::Disc { .. }));
    if d == 3 && spec.k() == 1 && discs {
        let m = analytic::pore_moments(spec.intensity(), spec.mean_base_perimeter())?;
        doc["pore_moments"] = json!({"mean": m.mean, "second_moment": m.second_moment, "variance": m.variance});
        rows.push(("pore_mean".into(), String::new(), m.mean));
        rows.push(("pore_second_moment".into(), String::new(), m.second_moment));
        rows.push(("pore_variance".into(), String::new(), m.variance));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["quantity", "argument", "value"]).expect("csv");
    for (q, a, v) in &rows {
        w.write_record([q.as_str(), a.as_str(), &format_number(*v)]).expect("csv");
    }
    let csv_text = String::from_utf8(w.into_inner().expect("csv")).expect("utf-8");
    Ok(Outcome {
        files: vec![
            ("analytic.json".into(), to_json_text(&doc)),
            ("analytic.csv".into(), csv_text),
        ],
        code: 0,
    })
}

fn vec_label(v: &Vec3, d: usize) -> String {
    let parts: Vec<String> = coords(v, d).iter().map(|x| format_number(*x)).collect();
    format!("({})", parts.join(" "))
}

fn selected(cfg: &RunConfig) -> Vec<EstimatorKind> {
    if let Some(list) = &cfg.estimators {
        return list.clone();
    }
    let mut out = vec![EstimatorKind::VolumeFraction];
    if cfg.lags.is_some() {
        out.push(EstimatorKind::Covariance);
    }
    if cfg.radii.is_some() {
        out.push(EstimatorKind::SphericalCdf);
    }
    if cfg.eta.is_some() {
        out.push(EstimatorKind::LinearCdf);
    }
    if cfg.n_lines.is_some() {
        out.push(EstimatorKind::SurfaceLinescan);
    }
    if cfg.n_dirs.is_some() || cfg.step.is_some() {
        out.push(EstimatorKind::SurfaceCovderiv);
    }
    out
}

fn run_estimators(cfg: &RunConfig, seed: u64, workers: usize) -> Result<Vec<EstimateReport>> {
    let spec: ProcessSpec = cfg.process()?;
    let window: Window = cfg.window()?;
    let d = spec.dim();
    let n_points = cfg.n_points.unwrap_or(10_000);
    let n_reps = cfg.n_reps.unwrap_or(10);
    let mc = McConfig {
        n_samples: n_points,
        n_reps,
        seed,
        workers,
        distance_cap: cfg.r_cap,
    };
    let mut reports = Vec::new();
    for kind in selected(cfg) {
        match kind {
            EstimatorKind::VolumeFraction => reports.push(estimate::est_volume_fraction(&spec, &window, &mc)?),
            EstimatorKind::Covariance => {
                reports.extend(estimate::est_covariance(&spec, &window, &cfg.lags(d)?, &mc)?)
            }
            EstimatorKind::SphericalCdf => {
                let radii = cfg.radii.clone().ok_or_else(|| Error::arg("config field `radii` is required"))?;
                reports.extend(estimate::est_spherical_cdf(&spec, &window, &radii, &mc)?)
            }
            EstimatorKind::LinearCdf => {
                let eta = cfg.eta(d)?.ok_or_else(|| Error::arg("config field `eta` is required"))?;
                let radii = cfg
                    .linear_radii
                    .clone()
                    .or_else(|| cfg.radii.clone())
                    .ok_or_else(|| Error::arg("config field `linear_radii` or `radii` is required"))?;
                reports.extend(estimate::est_linear_cdf(&spec, &window, &eta, &radii, &mc)?)
            }
            EstimatorKind::SurfaceLinescan => {
                let lines = McConfig {
                    n_samples: cfg.n_lines.unwrap_or(n_points),
                    ..mc.clone()
                };
                reports.push(estimate::est_specific_surface_linescan(&spec, &window, &lines)?)
            }
            EstimatorKind::SurfaceCovderiv => {
                let defaults = CovDerivOptions::default();
                let opts = CovDerivOptions {
                    step: cfg.step.unwrap_or(defaults.step),
                    n_dirs: cfg.n_dirs.unwrap_or(defaults.n_dirs),
                    richardson: cfg.richardson.unwrap_or(false),
                };
                reports.push(estimate::est_specific_surface_covderiv(&spec, &window, &opts, &mc)?)
            }
        }
    }
    Ok(reports)
}

fn cmd_compare(cfg: &RunConfig, seed: u64, workers: usize, threshold: f64) -> Result<Outcome> {
    if !(threshold > 0.0) {
        return Err(Error::arg("--z-threshold must be positive"));
    }
    let reports = run_estimators(cfg, seed, workers)?;
    let failures: Vec<&str> = reports
        .iter()
        .filter(|r| r.z_score.is_some_and(|z| !(z.abs() <= threshold)))
        .map(|r| r.name.as_str())
        .collect();
    for name in &failures {
        eprintln!("comparison failed: {name} exceeds |z| = {}", format_number(threshold));
    }
    let doc = json!({
        "z_threshold": threshold,
        "passed": failures.is_empty(),
        "reports": reports_to_json(&reports),
    });
    Ok(Outcome {
        files: vec![
            ("compare.json".into(), to_json_text(&doc)),
            ("compare.csv".into(), reports_to_csv(&reports)),
        ],
        code: if failures.is_empty() { 0 } else { 2 },
    })
}

fn cmd_optimize(cfg: &RunConfig, seed: u64) -> Result<Outcome> {
    let doc = cfg
        .design
        .as_ref()
        .ok_or_else(|| Error::arg("config field `design` is required"))?;
    let prob = DesignProblem::new(doc.lambda, doc.eps, doc.r_max)?;
    let sol = solve_radius_law(&prob)?;
    let mut out = sol.to_json(&prob);
    if doc.n_random > 0 {
        out["verified"] = Value::Bool(verify_solution(&prob, &sol, doc.n_random, seed));
        out["n_random"] = json!(doc.n_random);
    }
    Ok(Outcome {
        files: vec![("optimize.json".into(), to_json_text(&out))],
        code: 0,
    })
}
