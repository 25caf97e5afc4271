//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use cylproc::analytic;
use cylproc::estimate::{self, CovDerivOptions, EstimateReport, McConfig};
use cylproc::euclid::{CrossSection, Direction, Vec3};
use cylproc::model::{BaseDistribution, DirectionalDistribution, ProcessSpec};
use cylproc::optimize::{solve_radius_law, verify_solution, DesignProblem};
use cylproc::sim::Window;
use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

/// Collected sub-checks of one criterion.
struct Check {
    lines: Vec<String>,
    ok: bool,
}

impl Check {
    fn new() -> Self {
        Self { lines: Vec::new(), ok: true }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        let what = what.into();
        self.lines.push(format!("    [{}] {what}", if cond { "ok" } else { "FAILED" }));
        self.ok &= cond;
    }

    fn z(&mut self, r: &EstimateReport, limit: f64) {
        let z = r.z_score.expect("analytic value");
        self.require(
            z.abs() < limit,
            format!(
                "{}: estimate {:.6} ± {:.2e}, analytic {:.6}, z = {:+.2}",
                r.name,
                r.estimate,
                r.std_error,
                r.analytic.unwrap(),
                z
            ),
        );
    }
}

fn disc_spec(lambda: f64, a: f64, alpha: DirectionalDistribution) -> ProcessSpec {
    ProcessSpec::new(3, 1, lambda, alpha, BaseDistribution::Deterministic(CrossSection::disc(a).unwrap())).unwrap()
}

fn segment_spec(d: usize, k: usize, lambda: f64, a: f64, alpha: DirectionalDistribution) -> ProcessSpec {
    ProcessSpec::new(d, k, lambda, alpha, BaseDistribution::Deterministic(CrossSection::segment(a).unwrap())).unwrap()
}

fn mc(n: usize, reps: usize, seed: u64) -> McConfig {
    McConfig::new(n, reps, seed)
}

fn criterion_1(c: &mut Check) {
    let spec = disc_spec(0.1, 1.0, DirectionalDistribution::Isotropic);
    let window = Window::cube(3, 0.0, 20.0).unwrap();
    let start = Instant::now();
    let r = estimate::est_volume_fraction(&spec, &window, &mc(100_000, 50, 101)).unwrap();
    let took = start.elapsed();
    c.z(&r, 3.0);
    c.require(
        (r.analytic.unwrap() - 0.26956).abs() < 1e-4,
        format!("closed form {:.6} vs printed 0.26956", r.analytic.unwrap()),
    );
    c.require(took < Duration::from_secs(60), format!("runtime {:.1}s < 60s", took.as_secs_f64()));
}

/// Both branches of the planar strip covariance, written out directly.
fn strip_covariance_branches(lambda: f64, a: f64, r: f64) -> (f64, f64) {
    let p0 = (-2.0 * lambda * a).exp();
    let near = 1.0 - 2.0 * p0 + p0 * (-2.0 * lambda * r / PI).exp();
    let far = 1.0 - 2.0 * p0
        + p0 * (-(lambda / PI) * (4.0 * a * (2.0 * a / r).acos() + 2.0 * r - 2.0 * (r * r - 4.0 * a * a).sqrt())).exp();
    (near, far)
}

fn criterion_2(c: &mut Check) {
    let (lambda, a) = (0.5, 1.0);
    let spec = segment_spec(2, 1, lambda, a, DirectionalDistribution::Isotropic);
    let window = Window::cube(2, 0.0, 50.0).unwrap();
    let radii = [0.5, 1.0, 2.0, 4.0];
    let lags: Vec<Vec3> = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let phi = 0.3 + 0.7 * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), 0.0)
        })
        .collect();
    let start = Instant::now();
    let reports = estimate::est_covariance(&spec, &window, &lags, &mc(100_000, 50, 202)).unwrap();
    let took = start.elapsed();
    for (rep, &r) in reports.iter().zip(&radii) {
        let (near, far) = strip_covariance_branches(lambda, a, r);
        let oracle = if r <= 2.0 * a { near } else { far };
        c.require(
            (rep.analytic.unwrap() - oracle).abs() < 1e-9,
            format!("r = {r}: general covariance {:.12} vs piecewise {:.12}", rep.analytic.unwrap(), oracle),
        );
        c.z(rep, 3.0);
    }
    let (near, far) = strip_covariance_branches(lambda, a, 2.0 * a);
    c.require((near - far).abs() < 1e-12, format!("branches at r = 2a differ by {:.1e}", (near - far).abs()));
    let lib_gap = (analytic::covariance_2d_isotropic(lambda, a, 2.0 * a)
        - analytic::covariance_2d_isotropic(lambda, a, 2.0 * a * (1.0 + 1e-15)))
    .abs();
    c.require(lib_gap < 1e-12, format!("library formula jump at r = 2a: {lib_gap:.1e}"));
    c.require(took < Duration::from_secs(120), format!("runtime {:.1}s < 120s", took.as_secs_f64()));
}

fn criterion_3(c: &mut Check) {
    let (lambda, a) = (0.1, 1.0);
    let spec = disc_spec(lambda, a, DirectionalDistribution::Isotropic);
    let window = Window::cube(3, 0.0, 20.0).unwrap();
    let radii = [0.25, 0.5, 1.0];
    let reports = estimate::est_spherical_cdf(&spec, &window, &radii, &mc(50_000, 50, 303)).unwrap();
    for (rep, &r) in reports.iter().zip(&radii) {
        let oracle = 1.0 - (-2.0 * PI * a * lambda * r - PI * lambda * r * r).exp();
        c.require(
            (rep.analytic.unwrap() - oracle).abs() < 1e-12,
            format!("r = {r}: closed form {oracle:.9}"),
        );
        c.z(rep, 3.0);
    }

    let lambda = 0.1;
    let window = Window::cube(2, 0.0, 50.0).unwrap();
    let radii = [0.5, 1.0, 2.0];
    let est = |a: f64, seed: u64| {
        let spec = segment_spec(2, 1, lambda, a, DirectionalDistribution::Isotropic);
        let cfg = McConfig {
            distance_cap: Some(2.5),
            ..mc(50_000, 50, seed)
        };
        estimate::est_spherical_cdf(&spec, &window, &radii, &cfg).unwrap()
    };
    let thin = est(0.1, 304);
    let thick = est(5.0, 305);
    for ((t, k), &r) in thin.iter().zip(&thick).zip(&radii) {
        let oracle = 1.0 - (-2.0 * lambda * r).exp();
        c.require(
            (t.analytic.unwrap() - oracle).abs() < 1e-12 && (k.analytic.unwrap() - oracle).abs() < 1e-12,
            format!("r = {r}: both analytic values equal 1 - exp(-2 lambda r) = {oracle:.9}"),
        );
        let combined = (t.std_error.powi(2) + k.std_error.powi(2)).sqrt();
        c.require(
            (t.estimate - k.estimate).abs() < 3.0 * combined,
            format!(
                "r = {r}: a = 0.1 gives {:.5}, a = 5 gives {:.5}, gap {:.2} combined stderr",
                t.estimate,
                k.estimate,
                (t.estimate - k.estimate).abs() / combined
            ),
        );
        c.z(t, 3.0);
        c.z(k, 3.0);
    }
}

fn criterion_4(c: &mut Check) {
    let lambda = 0.1;
    let axis = Direction::axis(3, 2).unwrap();
    let spec = disc_spec(lambda, 1.0, DirectionalDistribution::single_axis(axis));
    let window = Window::cube(3, 0.0, 20.0).unwrap();

    let par = estimate::est_linear_cdf(&spec, &window, &axis, &[1.0], &mc(20_000, 20, 401)).unwrap();
    c.require(
        par[0].estimate < 0.005 && par[0].analytic.unwrap() == 0.0,
        format!("parallel: H(1) = {:.2e} (analytic {})", par[0].estimate, par[0].analytic.unwrap()),
    );

    let eta = Direction::axis(3, 0).unwrap();
    let radii = [0.5, 1.0, 2.0, 4.0];
    let perp = estimate::est_linear_cdf(&spec, &window, &eta, &radii, &mc(20_000, 50, 402)).unwrap();
    for rep in &perp {
        c.z(rep, 3.0);
    }
    let base_rate = spec.intensity() * spec.mean_base_perimeter() * analytic::mean_det(&spec, &eta);
    let constant = analytic::contact_constant(3, 1);
    let candidates = [("c", constant), ("2c", 2.0 * constant)];
    let mut accepted = Vec::new();
    for (label, cst) in candidates {
        let worst = perp
            .iter()
            .zip(&radii)
            .map(|(rep, &r)| {
                let h = 1.0 - (-cst * base_rate * r).exp();
                ((rep.estimate - h) / rep.std_error).abs()
            })
            .fold(0.0, f64::max);
        c.lines.push(format!("    candidate {label} = {cst:.6}: max |z| over r-grid {worst:.2}"));
        if worst < 3.0 {
            accepted.push(label);
        }
    }
    c.require(
        accepted == ["c"],
        format!("exactly one constant fits: {accepted:?} (c = 1/pi gives 1 - exp(-0.2 r))"),
    );
    c.require((constant - 1.0 / PI).abs() < 1e-15, "contact constant for lines in space is 1/pi");
}

fn criterion_5(c: &mut Check) {
    let (lambda, a) = (0.1, 1.0);
    let spec = disc_spec(lambda, a, DirectionalDistribution::Isotropic);
    let target = analytic::specific_surface(&spec);
    c.require(
        (target - 0.45896).abs() < 1e-4,
        format!("closed form {target:.6} vs printed 0.45896"),
    );
    let big = Window::cube(3, 0.0, 60.0).unwrap();
    let start = Instant::now();
    let ls = estimate::est_specific_surface_linescan(&spec, &big, &mc(100_000, 50, 501)).unwrap();
    c.z(&ls, 3.0);
    let rel = (ls.estimate - target).abs() / target;
    c.require(rel < 0.02, format!("line-scan relative error {:.3}% < 2% ({:.1}s)", 100.0 * rel, start.elapsed().as_secs_f64()));

    let window = Window::cube(3, 0.0, 30.0).unwrap();
    let opts = CovDerivOptions::default();
    let cd = estimate::est_specific_surface_covderiv(&spec, &window, &opts, &mc(20_000, 10, 502)).unwrap();
    let rel = (cd.estimate - target).abs() / target;
    c.require(
        rel < 0.05,
        format!("covariance-derivative estimate {:.5}, relative error {:.2}% < 5%", cd.estimate, 100.0 * rel),
    );

    let (lambda, a) = (0.2f64, 0.5);
    let slab_target = 2.0 * lambda * (-lambda * 2.0 * a).exp();
    let laws = [
        ("single normal e3", DirectionalDistribution::single_axis(Direction::axis(3, 2).unwrap())),
        (
            "normals e1, (1,1,1)",
            DirectionalDistribution::fixed_axes(vec![
                (Direction::axis(3, 0).unwrap(), 1.0),
                (Direction::from_slice(&[1.0, 1.0, 1.0]).unwrap(), 1.0),
            ])
            .unwrap(),
        ),
    ];
    let window = Window::cube(3, 0.0, 30.0).unwrap();
    for (i, (label, law)) in laws.into_iter().enumerate() {
        let spec = segment_spec(3, 2, lambda, a, law);
        let s = analytic::specific_surface(&spec);
        c.require(
            (s - slab_target).abs() < 1e-12,
            format!("slabs, {label}: analytic {s:.9} vs 2 lambda exp(-lambda E[2a]) = {slab_target:.9}"),
        );
        let r = estimate::est_specific_surface_linescan(&spec, &window, &mc(20_000, 50, 503 + i as u64)).unwrap();
        c.z(&r, 3.0);
    }
}

fn criterion_6(c: &mut Check) {
    for &(lambda, a) in &[(0.1, 1.0), (0.05, 0.5), (0.3, 2.0)] {
        let spec = disc_spec(lambda, a, DirectionalDistribution::Isotropic);
        let quad = analytic::specific_surface(&spec);
        let closed = 2.0 * PI * a * lambda * (-lambda * PI * a * a).exp();
        c.require(
            (quad - closed).abs() < 1e-9,
            format!("lambda = {lambda}, a = {a}: quadrature {quad:.12} vs closed form {closed:.12}"),
        );
    }
    let a = 1.0;
    c.require(
        ((-2.0 * a) * (PI / 4.0) - (-PI * a) * 0.5).abs() < 1e-15,
        "(-2a)(pi/4) = (-pi a)(1/2)",
    );
}

/// Adaptive Simpson on `[a, b]`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

fn criterion_7(c: &mut Check) {
    let mut worst: f64 = 0.0;
    for &lambda in &[0.05, 0.1, 0.5, 1.0] {
        for &cs in &[0.5, 2.0 * PI, 20.0] {
            let density = |r: f64| lambda * (cs + 2.0 * PI * r) * (-lambda * (cs * r + PI * r * r)).exp();
            let upper = {
                let mut u = 1.0;
                while lambda * (cs * u + PI * u * u) < 60.0 {
                    u *= 2.0;
                }
                u
            };
            let m1 = simpson(&|r| r * density(r), 0.0, upper, 1e-14);
            let m2 = simpson(&|r| r * r * density(r), 0.0, upper, 1e-14);
            let got = analytic::pore_moments(lambda, cs).unwrap();
            let e1 = (got.mean - m1).abs() / m1;
            let e2 = (got.second_moment - m2).abs() / m2;
            worst = worst.max(e1).max(e2);
        }
    }
    c.require(worst < 1e-6, format!("12-point grid: worst relative deviation {worst:.2e} < 1e-6"));

    let mut violations = 0;
    let mut cases = 0;
    for &lambda in &[0.02, 0.05, 0.1, 0.3, 1.0, 3.0] {
        let floor = 1.0 / (PI * lambda);
        for &factor in &[1.0, 1.001, 1.1, 1.5, 2.0, 5.0, 20.0] {
            let eps = floor * factor;
            let cs = analytic::variance_bound_cs(lambda, eps).unwrap();
            let var = analytic::pore_moments(lambda, cs).unwrap().variance;
            cases += 1;
            if var > eps {
                violations += 1;
            }
        }
    }
    c.require(violations == 0, format!("Var H <= eps on {cases} boundary points ({violations} violations)"));
}

fn criterion_8(c: &mut Check) {
    let prob = DesignProblem::new(0.1, 4.0, 2.0).unwrap();
    let sol = solve_radius_law(&prob).unwrap();
    c.require((sol.q - 0.45191).abs() < 1e-5, format!("q = {:.9} (printed 0.45191)", sol.q));
    let q_oracle = (4.0 - 1.0 / (PI * 0.1)).sqrt() / 2.0;
    c.require((sol.q - q_oracle).abs() < 1e-9, format!("q within 1e-9 of sqrt(eps - 1/(pi lambda)) / R_max = {q_oracle:.9}"));
    c.require(
        verify_solution(&prob, &sol, 1000, 801),
        "1000 random feasible laws: no improvement > 1e-9",
    );
    let spec = sol.process(0.1, DirectionalDistribution::Isotropic).unwrap();
    let window = Window::cube(3, 0.0, 20.0).unwrap();
    let r = estimate::est_volume_fraction(&spec, &window, &mc(100_000, 50, 802)).unwrap();
    c.require(
        (r.analytic.unwrap() - sol.achieved_p).abs() < 1e-12,
        format!("achieved_p {:.6} (printed 0.43352)", sol.achieved_p),
    );
    c.z(&r, 3.0);
}

fn cli(args: &[&str], config: &Path) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_cylproc"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .expect("run binary");
    (out.status.code(), out.stdout)
}

fn criterion_9(c: &mut Check) {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{
  "spec": {"d": 3, "k": 1, "lambda": 0.1,
           "alpha": {"type": "isotropic"},
           "base": {"type": "deterministic", "section": {"shape": "disc", "radius": 1.0}}},
  "window": {"lo": [0, 0, 0], "hi": [20, 20, 20]},
  "lags": [[0.5, 0, 0], [0, 1, 1]],
  "radii": [0.25, 0.5, 1.0],
  "eta": [1, 0, 0],
  "n_points": 5000, "n_reps": 8, "n_lines": 2000, "n_dirs": 8,
  "design": {"lambda": 0.1, "eps": 4, "r_max": 2, "n_random": 200}
}"#,
    )
    .unwrap();
    for cmd in ["analytic", "estimate", "compare", "simulate", "optimize"] {
        let first = cli(&[cmd, "--seed", "42", "--workers", "2"], &config);
        let second = cli(&[cmd, "--seed", "42", "--workers", "2"], &config);
        c.require(
            first.0 == Some(0) && first == second && !first.1.is_empty(),
            format!("{cmd}: exit {:?}, two runs byte-identical ({} bytes)", first.0, first.1.len()),
        );
    }
    let one = cli(&["estimate", "--seed", "42", "--workers", "1"], &config);
    let four = cli(&["estimate", "--seed", "42", "--workers", "4"], &config);
    c.require(one == four, "estimate output identical for workers 1 and 4");

    let spec = disc_spec(0.1, 1.0, DirectionalDistribution::Isotropic);
    let window = Window::cube(3, 0.0, 20.0).unwrap();
    let run = |w: usize| {
        let cfg = mc(5000, 8, 9).with_workers(w);
        let mut all = vec![estimate::est_volume_fraction(&spec, &window, &cfg).unwrap()];
        all.extend(estimate::est_spherical_cdf(&spec, &window, &[0.5], &cfg).unwrap());
        all.push(estimate::est_specific_surface_linescan(&spec, &window, &cfg).unwrap());
        all
    };
    c.require(run(1) == run(4), "library reports identical for workers 1 and 4");
}

fn main() {
    let criteria: [(&str, fn(&mut Check)); 9] = [
        ("volume fraction", criterion_1),
        ("planar covariance", criterion_2),
        ("spherical contact", criterion_3),
        ("linear contact anisotropy", criterion_4),
        ("specific surface", criterion_5),
        ("product identity", criterion_6),
        ("pore moments", criterion_7),
        ("optimizer", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let mut check = Check::new();
        let start = Instant::now();
        f(&mut check);
        let status = if check.ok { "PASS" } else { "FAIL" };
        println!("{status} criterion {} ({name}) [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
        for line in &check.lines {
            println!("{line}");
        }
        if !check.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
