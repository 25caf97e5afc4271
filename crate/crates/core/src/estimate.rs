//! Monte Carlo estimators with replicate-level standard errors.
//!
//! Replicate `r` draws its realization from RNG stream `2r` and its query
//! points from stream `2r + 1` of the configured seed. Replicates run on a
//! fixed-size worker pool, results are collected in replicate order and
//! reduced sequentially, so reports do not depend on the worker count.

use crate::analytic;
use crate::error::{Error, Result};
use crate::euclid::{crofton_factor, Direction, Vec3};
use crate::model::{DirectionalDistribution, ProcessSpec};
use crate::rng::{query_stream_id, realization_stream_id, stream, Stream};
use crate::sim::{sample_realization_on, Realization, Window};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Point estimate with its standard error and the matching analytic value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub n_replicates: u64,
    pub seed: u64,
    pub analytic: Option<f64>,
    pub z_score: Option<f64>,
}

impl EstimateReport {
    /// Summarises per-replicate values.
    pub fn from_replicates(
        name: impl Into<String>,
        values: &[f64],
        n_samples: u64,
        seed: u64,
        analytic: Option<f64>,
    ) -> Self {
        let n = values.len() as f64;
        let estimate = values.iter().sum::<f64>() / n;
        let std_error = if values.len() > 1 {
            let ss: f64 = values.iter().map(|v| (v - estimate).powi(2)).sum();
            (ss / (n - 1.0) / n).sqrt()
        } else {
            0.0
        };
        let z_score = analytic.map(|a| z_score(estimate, std_error, a));
        Self {
            name: name.into(),
            estimate,
            std_error,
            n_samples,
            n_replicates: values.len() as u64,
            seed,
            analytic,
            z_score,
        }
    }
}

fn z_score(estimate: f64, se: f64, analytic: f64) -> f64 {
    let diff = estimate - analytic;
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

/// Sampling effort and reproducibility settings shared by the estimators.
#[derive(Clone, Debug, PartialEq)]
pub struct McConfig {
    /// Query points (or rays, lines) per replicate; per direction for the
    /// covariance-derivative estimator.
    pub n_samples: usize,
    pub n_reps: usize,
    pub seed: u64,
    pub workers: usize,
    /// Largest distance probed by contact-distribution queries; defaults to
    /// a quarter of the smallest window side.
    pub distance_cap: Option<f64>,
}

impl McConfig {
    pub fn new(n_samples: usize, n_reps: usize, seed: u64) -> Self {
        Self {
            n_samples,
            n_reps,
            seed,
            workers: 1,
            distance_cap: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 || self.n_reps == 0 {
            return Err(Error::arg("sample and replicate counts must be >= 1"));
        }
        if self.workers == 0 {
            return Err(Error::arg("worker count must be >= 1"));
        }
        Ok(())
    }

    fn cap(&self, window: &Window) -> f64 {
        self.distance_cap.unwrap_or(0.25 * window.min_side())
    }
}

/// Runs `f(realization, query_rng)` for every replicate on the worker pool.
fn run_replicates<T, F>(spec: &ProcessSpec, window: &Window, cfg: &McConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Realization, &mut Stream) -> Result<T> + Sync,
{
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::arg(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        (0..cfg.n_reps as u64)
            .into_par_iter()
            .map(|r| {
                let real = sample_realization_on(spec, window, cfg.seed, realization_stream_id(r))?;
                let mut rng = stream(cfg.seed, query_stream_id(r));
                f(&real, &mut rng)
            })
            .collect()
    })
}

fn column(rows: &[Vec<f64>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

fn fmt_vec(v: &Vec3, dim: usize) -> String {
    let parts: Vec<String> = v.as_slice()[..dim].iter().map(|x| format_number(*x)).collect();
    format!("({})", parts.join(","))
}

/// Fraction of uniform window points covered by the union set.
pub fn est_volume_fraction(spec: &ProcessSpec, window: &Window, cfg: &McConfig) -> Result<EstimateReport> {
    let vals = run_replicates(spec, window, cfg, |real, rng| {
        let mut hits = 0usize;
        for _ in 0..cfg.n_samples {
            if real.contains_unchecked(&window.sample(rng)) {
                hits += 1;
            }
        }
        Ok(hits as f64 / cfg.n_samples as f64)
    })?;
    Ok(EstimateReport::from_replicates(
        "volume_fraction",
        &vals,
        cfg.n_samples as u64,
        cfg.seed,
        Some(analytic::volume_fraction(spec)),
    ))
}

/// The sub-box of points `x` with `x` and `x + h` both in the window.
fn lag_box(window: &Window, h: &Vec3) -> Result<Window> {
    let (lo, hi) = (window.lo(), window.hi());
    let d = window.dim();
    let lo2: Vec<f64> = (0..d).map(|i| lo[i] + (-h[i]).max(0.0)).collect();
    let hi2: Vec<f64> = (0..d).map(|i| hi[i] - h[i].max(0.0)).collect();
    Window::new(&lo2, &hi2)
}

/// `P(x ∈ U, x + h ∈ U)` for each lag, from one set of uniform draws per
/// replicate mapped into the lag-eroded window.
pub fn est_covariance(
    spec: &ProcessSpec,
    window: &Window,
    lags: &[Vec3],
    cfg: &McConfig,
) -> Result<Vec<EstimateReport>> {
    let limit = 0.25 * window.min_side();
    let mut boxes = Vec::with_capacity(lags.len());
    for h in lags {
        if h.norm() >= limit {
            return Err(Error::arg(format!(
                "lag {} must be shorter than a quarter of the smallest window side ({limit})",
                fmt_vec(h, window.dim())
            )));
        }
        if window.dim() == 2 && h.z != 0.0 {
            return Err(Error::arg("planar lags must have zero third coordinate"));
        }
        boxes.push(lag_box(window, h)?);
    }
    let d = window.dim();
    let rows = run_replicates(spec, window, cfg, |real, rng| {
        use rand::Rng;
        let mut hits = vec![0usize; lags.len()];
        for _ in 0..cfg.n_samples {
            let mut u = Vec3::zeros();
            for i in 0..d {
                u[i] = rng.random::<f64>();
            }
            for (j, (h, b)) in lags.iter().zip(&boxes).enumerate() {
                let x = b.from_unit(&u);
                if real.contains_unchecked(&x) && real.contains_unchecked(&(x + h)) {
                    hits[j] += 1;
                }
            }
        }
        Ok(hits.iter().map(|&c| c as f64 / cfg.n_samples as f64).collect::<Vec<_>>())
    })?;
    Ok(lags
        .iter()
        .enumerate()
        .map(|(j, h)| {
            EstimateReport::from_replicates(
                format!("covariance[h={}]", fmt_vec(h, d)),
                &column(&rows, j),
                cfg.n_samples as u64,
                cfg.seed,
                Some(analytic::covariance(spec, h)),
            )
        })
        .collect())
}

fn check_pore_sampling(spec: &ProcessSpec) -> Result<()> {
    let p = spec.volume_fraction();
    if p > 0.999 {
        return Err(Error::Rejection(format!(
            "volume fraction {p} leaves too little pore space for contact estimation"
        )));
    }
    Ok(())
}

/// Pooled conditional frequencies `sum hits / sum pore` over replicates.
///
/// Each row is `[pore count, hits at radius 0, hits at radius 1, ...]`.
/// Per-replicate ratios are biased when a window holds few pore components,
/// so the ratio of sums is reported, with delta-method replicate values
/// `R + (X_i - R Y_i) / mean(Y)` whose mean is `R` and whose spread gives
/// the standard error.
fn pooled_ratios(rows: &[Vec<f64>], n_radii: usize) -> Result<Vec<Vec<f64>>> {
    let pore: Vec<f64> = column(rows, 0);
    let n = pore.len() as f64;
    let mean_pore = pore.iter().sum::<f64>() / n;
    if mean_pore == 0.0 {
        return Err(Error::Rejection(
            "no uncovered query points in the window; enlarge it or lower the intensity".into(),
        ));
    }
    Ok((0..n_radii)
        .map(|j| {
            let hits = column(rows, j + 1);
            let ratio = hits.iter().sum::<f64>() / n / mean_pore;
            hits.iter()
                .zip(&pore)
                .map(|(x, y)| ratio + (x - ratio * y) / mean_pore)
                .collect()
        })
        .collect())
}

fn check_radii(radii: &[f64]) -> Result<f64> {
    if radii.is_empty() {
        return Err(Error::arg("at least one radius is required"));
    }
    if radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::arg("radii must be finite and >= 0"));
    }
    Ok(radii.iter().copied().fold(0.0, f64::max))
}

/// Spherical contact distribution from distances of pore points among
/// `n_samples` uniform points per replicate.
pub fn est_spherical_cdf(
    spec: &ProcessSpec,
    window: &Window,
    radii: &[f64],
    cfg: &McConfig,
) -> Result<Vec<EstimateReport>> {
    let rmax = check_radii(radii)?;
    let cap = cfg.cap(window);
    if rmax > cap {
        return Err(Error::arg(format!(
            "radius {rmax} exceeds the distance cap {cap}"
        )));
    }
    check_pore_sampling(spec)?;
    let region = window.eroded(cap)?;
    let rows = run_replicates(spec, window, cfg, |real, rng| {
        let mut counts = vec![0.0; radii.len() + 1];
        for _ in 0..cfg.n_samples {
            let x = region.sample(rng);
            if real.contains_unchecked(&x) {
                continue;
            }
            counts[0] += 1.0;
            let dist = real.distance_unchecked(&x);
            for (c, r) in counts[1..].iter_mut().zip(radii) {
                if dist <= *r {
                    *c += 1.0;
                }
            }
        }
        Ok(counts)
    })?;
    let cols = pooled_ratios(&rows, radii.len())?;
    Ok(radii
        .iter()
        .zip(&cols)
        .map(|(r, vals)| {
            EstimateReport::from_replicates(
                format!("spherical_cdf[r={}]", format_number(*r)),
                vals,
                cfg.n_samples as u64,
                cfg.seed,
                Some(analytic::spherical_cdf(spec, *r)),
            )
        })
        .collect())
}

/// Linear contact distribution in direction `eta` from segments started at
/// the pore points among `n_samples` uniform points per replicate.
pub fn est_linear_cdf(
    spec: &ProcessSpec,
    window: &Window,
    eta: &Direction,
    radii: &[f64],
    cfg: &McConfig,
) -> Result<Vec<EstimateReport>> {
    let rmax = check_radii(radii)?;
    if eta.dim() != window.dim() {
        return Err(Error::arg("direction dimension does not match the window"));
    }
    check_pore_sampling(spec)?;
    let v = eta.vector();
    let region = lag_box(window, &(v * rmax))?;
    let analytic_vals: Vec<Option<f64>> = radii
        .iter()
        .map(|r| analytic::linear_cdf(spec, eta, *r).ok())
        .collect();
    let rows = run_replicates(spec, window, cfg, |real, rng| {
        let mut counts = vec![0.0; radii.len() + 1];
        for _ in 0..cfg.n_samples {
            let x = region.sample(rng);
            if real.contains_unchecked(&x) {
                continue;
            }
            counts[0] += 1.0;
            let iv = real.intervals_unchecked(&x, &v, rmax);
            if let Some(&(t_in, _)) = iv.first() {
                for (c, r) in counts[1..].iter_mut().zip(radii) {
                    if t_in <= *r {
                        *c += 1.0;
                    }
                }
            }
        }
        Ok(counts)
    })?;
    let cols = pooled_ratios(&rows, radii.len())?;
    Ok(radii
        .iter()
        .zip(&cols)
        .enumerate()
        .map(|(j, (r, vals))| {
            EstimateReport::from_replicates(
                format!("linear_cdf[r={}]", format_number(*r)),
                vals,
                cfg.n_samples as u64,
                cfg.seed,
                analytic_vals[j],
            )
        })
        .collect())
}

/// Specific surface from component entries along random lines.
///
/// Each line has a Haar direction and passes through a uniform window
/// point; `entries / chord length` estimates the intensity of entry points
/// on lines of that direction, which is half the boundary-crossing
/// intensity. Entries at the chord start (components already entered) are
/// not counted, which keeps the count of a stationary point process
/// unbiased.
pub fn est_specific_surface_linescan(
    spec: &ProcessSpec,
    window: &Window,
    cfg: &McConfig,
) -> Result<EstimateReport> {
    let d = window.dim();
    let factor = crofton_factor(d);
    let vals = run_replicates(spec, window, cfg, |real, rng| {
        let mut sum = 0.0;
        for _ in 0..cfg.n_samples {
            let dir = DirectionalDistribution::Isotropic.sample(d, rng).vector();
            let anchor = window.sample(rng);
            let Some((t0, t1)) = window.clip_line(&anchor, &dir) else {
                continue;
            };
            let len = t1 - t0;
            if len <= 0.0 {
                continue;
            }
            let start = anchor + dir * t0;
            let entries = real
                .intervals_unchecked(&start, &dir, len)
                .iter()
                .filter(|(a, _)| *a > 0.0)
                .count();
            sum += entries as f64 / len;
        }
        Ok(factor * sum / cfg.n_samples as f64)
    })?;
    Ok(EstimateReport::from_replicates(
        "specific_surface_linescan",
        &vals,
        cfg.n_samples as u64,
        cfg.seed,
        Some(analytic::specific_surface(spec)),
    ))
}

/// Settings of the covariance-derivative surface estimator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovDerivOptions {
    pub step: f64,
    pub n_dirs: usize,
    /// Combine steps `h` and `h/2` as `2 D(h/2) - D(h)`.
    pub richardson: bool,
}

impl Default for CovDerivOptions {
    fn default() -> Self {
        Self {
            step: 0.02,
            n_dirs: 64,
            richardson: false,
        }
    }
}

/// Specific surface from one-sided difference quotients of the empirical
/// covariance along Haar directions. Carries an `O(step)` bias.
pub fn est_specific_surface_covderiv(
    spec: &ProcessSpec,
    window: &Window,
    opts: &CovDerivOptions,
    cfg: &McConfig,
) -> Result<EstimateReport> {
    let cap = cfg.cap(window);
    if !(opts.step > 0.0 && opts.step < cap) {
        return Err(Error::arg(format!(
            "difference step must lie in (0, {cap}), got {}",
            opts.step
        )));
    }
    if opts.n_dirs == 0 {
        return Err(Error::arg("at least one direction is required"));
    }
    let d = window.dim();
    let factor = crofton_factor(d);
    let region = window.eroded(opts.step)?;
    let h = opts.step;
    let vals = run_replicates(spec, window, cfg, |real, rng| {
        let mut total = 0.0;
        for _ in 0..opts.n_dirs {
            let dir = DirectionalDistribution::Isotropic.sample(d, rng).vector();
            // Counts of x ∈ U with x + t dir ∉ U, at t = h and t = h / 2.
            let (mut lost, mut lost_half) = (0usize, 0usize);
            for _ in 0..cfg.n_samples {
                let x = region.sample(rng);
                if !real.contains_unchecked(&x) {
                    continue;
                }
                if !real.contains_unchecked(&(x + dir * h)) {
                    lost += 1;
                }
                if opts.richardson && !real.contains_unchecked(&(x + dir * (0.5 * h))) {
                    lost_half += 1;
                }
            }
            let n = cfg.n_samples as f64;
            let deriv = -(lost as f64) / n / h;
            total += if opts.richardson {
                2.0 * (-(lost_half as f64) / n / (0.5 * h)) - deriv
            } else {
                deriv
            };
        }
        Ok(-factor * total / opts.n_dirs as f64)
    })?;
    Ok(EstimateReport::from_replicates(
        "specific_surface_covderiv",
        &vals,
        (cfg.n_samples * opts.n_dirs) as u64,
        cfg.seed,
        Some(analytic::specific_surface(spec)),
    ))
}

/// Numbers in reports: 12 significant digits, plain integers when exact.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
    format!("{rounded}")
}

/// Rounds to 12 significant digits (identity on non-finite values).
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().expect("formatted float")
    } else {
        x
    }
}

pub const REPORT_CSV_HEADER: &str = "name,estimate,std_error,n_samples,n_replicates,seed,analytic,z_score";

/// CSV with one row per report; absent analytic values are empty fields.
pub fn reports_to_csv(reports: &[EstimateReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_CSV_HEADER.split(',')).expect("in-memory csv");
    for r in reports {
        let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
        w.write_record([
            r.name.clone(),
            format_number(r.estimate),
            format_number(r.std_error),
            r.n_samples.to_string(),
            r.n_replicates.to_string(),
            r.seed.to_string(),
            opt(r.analytic),
            opt(r.z_score),
        ])
        .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

/// JSON array mirroring the reports, numbers rounded to 12 significant
/// digits; infinite z-scores become `null`.
pub fn reports_to_json(reports: &[EstimateReport]) -> serde_json::Value {
    let rounded: Vec<EstimateReport> = reports
        .iter()
        .map(|r| EstimateReport {
            estimate: round_sig(r.estimate),
            std_error: round_sig(r.std_error),
            analytic: r.analytic.map(round_sig),
            z_score: r.z_score.map(round_sig),
            ..r.clone()
        })
        .collect();
    serde_json::to_value(rounded).expect("reports serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::CrossSection;
    use crate::model::BaseDistribution;

    fn disc_spec(lambda: f64, alpha: DirectionalDistribution) -> ProcessSpec {
        ProcessSpec::new(3, 1, lambda, alpha, BaseDistribution::Deterministic(CrossSection::disc(1.0).unwrap())).unwrap()
    }

    fn strip_spec(lambda: f64, a: f64, alpha: DirectionalDistribution) -> ProcessSpec {
        ProcessSpec::new(2, 1, lambda, alpha, BaseDistribution::Deterministic(CrossSection::segment(a).unwrap())).unwrap()
    }

    #[test]
    fn report_statistics() {
        let r = EstimateReport::from_replicates("x", &[1.0, 2.0, 3.0], 10, 5, Some(2.5));
        assert_eq!(r.estimate, 2.0);
        assert!((r.std_error - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((r.z_score.unwrap() + 0.5 / (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let single = EstimateReport::from_replicates("x", &[0.0], 10, 5, Some(0.0));
        assert_eq!(single.std_error, 0.0);
        assert_eq!(single.z_score, Some(0.0));
        let none = EstimateReport::from_replicates("x", &[0.0, 1.0], 10, 5, None);
        assert_eq!(none.z_score, None);
    }

    #[test]
    fn zero_intensity_estimates_are_zero() {
        let spec = disc_spec(0.1, DirectionalDistribution::Isotropic).with_zero_intensity();
        let w = Window::cube(3, 0.0, 8.0).unwrap();
        let cfg = McConfig::new(500, 3, 1);
        let vf = est_volume_fraction(&spec, &w, &cfg).unwrap();
        assert_eq!((vf.estimate, vf.z_score), (0.0, Some(0.0)));
        let ls = est_specific_surface_linescan(&spec, &w, &cfg).unwrap();
        assert_eq!(ls.estimate, 0.0);
        let cd = est_specific_surface_covderiv(&spec, &w, &CovDerivOptions { n_dirs: 4, ..Default::default() }, &cfg).unwrap();
        assert_eq!(cd.estimate, 0.0);
        let sph = est_spherical_cdf(&spec, &w, &[0.0, 1.0], &cfg).unwrap();
        assert!(sph.iter().all(|r| r.estimate == 0.0));
    }

    #[test]
    fn lag_zero_matches_volume_fraction() {
        let spec = disc_spec(0.1, DirectionalDistribution::Isotropic);
        let w = Window::cube(3, 0.0, 10.0).unwrap();
        let cfg = McConfig::new(2000, 4, 9);
        let vf = est_volume_fraction(&spec, &w, &cfg).unwrap();
        let cov = est_covariance(&spec, &w, &[Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0)], &cfg).unwrap();
        assert_eq!(cov[0].estimate, vf.estimate);
        assert_eq!(cov[0].std_error, vf.std_error);
        assert!(est_covariance(&spec, &w, &[Vec3::new(3.0, 0.0, 0.0)], &cfg).is_err());
    }

    #[test]
    fn results_do_not_depend_on_worker_count() {
        let spec = disc_spec(0.1, DirectionalDistribution::Isotropic);
        let w = Window::cube(3, 0.0, 10.0).unwrap();
        let one = McConfig::new(1000, 6, 3);
        let four = one.clone().with_workers(4);
        assert_eq!(est_volume_fraction(&spec, &w, &one).unwrap(), est_volume_fraction(&spec, &w, &four).unwrap());
        assert_eq!(
            est_specific_surface_linescan(&spec, &w, &one).unwrap(),
            est_specific_surface_linescan(&spec, &w, &four).unwrap()
        );
    }

    #[test]
    fn empirical_cdfs_are_monotone() {
        let spec = disc_spec(0.1, DirectionalDistribution::Isotropic);
        let w = Window::cube(3, 0.0, 12.0).unwrap();
        let cfg = McConfig::new(2000, 3, 4);
        let radii = [0.0, 0.25, 0.5, 1.0, 2.0];
        let sph = est_spherical_cdf(&spec, &w, &radii, &cfg).unwrap();
        assert_eq!(sph[0].estimate, 0.0);
        assert!(sph.windows(2).all(|p| p[0].estimate <= p[1].estimate));
        let lin = est_linear_cdf(&spec, &w, &Direction::axis(3, 0).unwrap(), &radii, &cfg).unwrap();
        assert!(lin.windows(2).all(|p| p[0].estimate <= p[1].estimate));
        assert!(est_spherical_cdf(&spec, &w, &[5.0], &cfg).is_err());
    }

    #[test]
    fn planar_volume_fraction_and_surface() {
        let spec = strip_spec(0.5, 1.0, DirectionalDistribution::Isotropic);
        let w = Window::cube(2, 0.0, 50.0).unwrap();
        let cfg = McConfig::new(20_000, 20, 12);
        let vf = est_volume_fraction(&spec, &w, &cfg).unwrap();
        assert!(vf.z_score.unwrap().abs() < 4.0, "{vf:?}");
        let ls = est_specific_surface_linescan(&spec, &w, &McConfig::new(5_000, 20, 13)).unwrap();
        assert!(ls.z_score.unwrap().abs() < 4.0, "{ls:?}");
    }

    #[test]
    fn nearly_covered_window_is_rejected() {
        let spec = strip_spec(5.0, 1.0, DirectionalDistribution::Isotropic);
        let w = Window::cube(2, 0.0, 20.0).unwrap();
        assert!(matches!(
            est_spherical_cdf(&spec, &w, &[1.0], &McConfig::new(10, 1, 0)),
            Err(Error::Rejection(_))
        ));
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.1 + 0.2), "0.3");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(round_sig(123456.7891234567), 123456.789123);
    }

    #[test]
    fn csv_and_json_layout() {
        let reports = vec![
            EstimateReport::from_replicates("a", &[0.25, 0.5], 100, 7, Some(0.4)),
            EstimateReport::from_replicates("b", &[1.0, 1.0], 100, 7, None),
        ];
        let csv = reports_to_csv(&reports);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(REPORT_CSV_HEADER));
        assert_eq!(lines.next(), Some("a,0.375,0.125,100,2,7,0.4,-0.2"));
        assert_eq!(lines.next(), Some("b,1,0,100,2,7,,"));
        let json = reports_to_json(&reports);
        assert_eq!(json[1]["analytic"], serde_json::Value::Null);
        assert_eq!(json[0]["z_score"], serde_json::json!(-0.2));
    }
}
