//! Closed-form characteristics of Poisson cylinder processes.
//!
//! Expectations over the directional law are exact sums for discrete laws.
//! Continuous laws use Gauss–Legendre rules written about the natural pole
//! of each integrand (the lag for covariances, the test direction for
//! contact distributions), with the polar range split where the projected
//! lag crosses a base diameter.

use crate::error::{Error, Result};
use crate::euclid::{
    covariogram, covariogram_derivative_at_origin, crofton_factor, haar_line_rule,
    union_area_of_translates, ConvexPolygon, CrossSection, Direction, Subspace, Vec2, Vec3,
    HAAR_NODES_3D,
};
use crate::quadrature::{gauss_legendre_on, gauss_legendre_pieces};
use crate::model::{DirectionalDistribution, ProcessSpec};
use statrs::function::erf::erfc;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Largest point set accepted by [`capacity_finite`].
pub const MAX_CAPACITY_POINTS: usize = 16;

/// Moments of the pore radius (spherical contact distance from a typical
/// pore point).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoreMoments {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
}

pub fn volume_fraction(spec: &ProcessSpec) -> f64 {
    spec.volume_fraction()
}

/// Polar angles (measured from a lag `h` used as pole) at which the length
/// of `Pr_L(h)` equals one of `lengths`.
fn polar_breaks(spec: &ProcessSpec, h_norm: f64, lengths: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for &len in lengths {
        if !(len > 0.0 && len < h_norm) {
            continue;
        }
        let s = len / h_norm;
        if spec.k() == 1 {
            // |Pr_L h| = |h| sin(angle between h and the line)
            let t = s.asin();
            out.push(t);
            if spec.dim() == 2 {
                out.push(PI - t);
            }
        } else {
            // |Pr_L h| = |h| |cos(angle between h and the normal)|
            out.push(s.acos());
        }
    }
    out
}

/// Directional rule for `spec` with pole `h` and kinks at `lengths`.
fn alpha_rule(spec: &ProcessSpec, pole: &Vec3, lengths: &[f64]) -> Vec<(Vec3, f64)> {
    let n = pole.norm();
    if n == 0.0 || !matches!(spec.alpha(), DirectionalDistribution::Isotropic) {
        return spec.alpha().rule(spec.dim(), None, &[]);
    }
    let breaks = polar_breaks(spec, n, lengths);
    spec.alpha().rule(spec.dim(), Some(pole), &breaks)
}

fn diameters(spec: &ProcessSpec) -> Vec<f64> {
    spec.components().iter().map(|(k, _)| k.diameter()).collect()
}

fn expect_over_shapes<F>(spec: &ProcessSpec, rule: &[(Vec3, f64)], mut f: F) -> f64
where
    F: FnMut(&Subspace, &CrossSection) -> f64,
{
    let mut total = 0.0;
    for (dir, w) in rule {
        let param = Direction::new(spec.dim(), *dir).expect("unit node");
        let l = spec.subspace(param);
        let inner: f64 = spec.components().iter().map(|(k, q)| q * f(&l, k)).sum();
        total += w * inner;
    }
    total
}

/// `E_theta[gamma_K(Pr_L(h))]`.
fn mean_projected_covariogram(spec: &ProcessSpec, h: &Vec3) -> f64 {
    // The covariogram is even; fixing the sign of `h` makes that exact.
    let h = &match h.iter().copied().find(|c| *c != 0.0) {
        Some(c) if c < 0.0 => -h,
        _ => *h,
    };
    let rule = alpha_rule(spec, h, &diameters(spec));
    expect_over_shapes(spec, &rule, |l, k| covariogram(k, &l.project_along(h)))
}

/// `P(F ∩ U ≠ ∅)` for a finite point set `F` (at most
/// [`MAX_CAPACITY_POINTS`] points).
pub fn capacity_finite(spec: &ProcessSpec, points: &[Vec3]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::arg("capacity functional needs at least one point"));
    }
    if points.len() > MAX_CAPACITY_POINTS {
        return Err(Error::arg(format!(
            "capacity functional supports at most {MAX_CAPACITY_POINTS} points, got {}",
            points.len()
        )));
    }
    let lambda = spec.intensity();
    let area = spec.mean_base_area();
    let mean_volume = match points {
        [_] => area,
        [a, b] => 2.0 * area - mean_projected_covariogram(spec, &(b - a)),
        _ => {
            let rel: Vec<Vec3> = points.iter().map(|p| p - points[0]).collect();
            let rule = alpha_rule(spec, &Vec3::zeros(), &[]);
            expect_over_shapes(spec, &rule, |l, k| {
                let proj: Vec<Vec2> = rel.iter().map(|x| l.project_along(x)).collect();
                union_area_of_translates(&k.reflected(), &proj)
            })
        }
    };
    Ok(-(-lambda * mean_volume).exp_m1())
}

/// `C(h) = P(o ∈ U, h ∈ U)`.
pub fn covariance(spec: &ProcessSpec, h: &Vec3) -> f64 {
    let lambda = spec.intensity();
    let area = spec.mean_base_area();
    let g = if h.norm() == 0.0 {
        area
    } else {
        mean_projected_covariogram(spec, h)
    };
    1.0 - 2.0 * (-lambda * area).exp() + (-2.0 * lambda * area + lambda * g).exp()
}

/// Covariance of isotropic planar strips of width `2a` at distance `r`.
pub fn covariance_2d_isotropic(lambda: f64, a: f64, r: f64) -> f64 {
    let base = 1.0 - 2.0 * (-2.0 * lambda * a).exp();
    if r <= 2.0 * a {
        base + (-2.0 * lambda * a - 2.0 * lambda * r / PI).exp()
    } else {
        let s = 2.0 * a / r;
        let inner = 4.0 * a * s.acos() + 2.0 * r * (1.0 - (1.0 - s * s).sqrt());
        base + (-2.0 * lambda * a - lambda / PI * inner).exp()
    }
}

/// One-sided derivative of `t -> C(t h)` at `t = 0`.
pub fn covariance_derivative(spec: &ProcessSpec, h_dir: &Direction) -> f64 {
    let lambda = spec.intensity();
    let h = h_dir.vector();
    let rule = alpha_rule(spec, &h, &[]);
    let e = expect_over_shapes(spec, &rule, |l, k| derivative_term(l, k, &h));
    lambda * (-lambda * spec.mean_base_area()).exp() * e
}

/// `gamma'_K(o, unit(Pr_L v)) [v, L]`, zero when `Pr_L v` vanishes.
fn derivative_term(l: &Subspace, k: &CrossSection, v: &Vec3) -> f64 {
    let c = l.project_along(v);
    let n = c.norm();
    if n <= 1e-15 {
        return 0.0;
    }
    covariogram_derivative_at_origin(k, &(c / n)) * n.min(1.0)
}

/// `c_{d,k}`: ratio turning `E[S(K)] ∫[xi, eta] alpha(d xi)` into the
/// hitting rate of a unit segment in direction `eta`.
pub fn contact_constant(d: usize, k: usize) -> f64 {
    let m = d - k;
    let omega = |j: usize| crate::euclid::ball_constants(j).map(|c| c.1).unwrap_or(f64::NAN);
    // omega_3 = 4 pi, omega_2 = 2 pi, omega_1 = 2
    omega(m + 1) / (2.0 * PI * omega(m))
}

/// `∫ [xi, eta] alpha(d xi)`.
pub fn mean_det(spec: &ProcessSpec, eta: &Direction) -> f64 {
    let v = eta.vector();
    let rule = alpha_rule(spec, &v, &[]);
    rule.iter()
        .map(|(dir, w)| {
            let l = spec.subspace(Direction::new(spec.dim(), *dir).expect("unit node"));
            w * crate::euclid::subspace_det(&l, eta)
        })
        .sum()
}

/// Linear contact distribution `H_{[o, eta]}(r)`; requires bases that are
/// isotropic within `L^⊥` (segments or discs).
pub fn linear_cdf(spec: &ProcessSpec, eta: &Direction, r: f64) -> Result<f64> {
    if spec
        .components()
        .iter()
        .any(|(k, _)| matches!(k, CrossSection::Polygon(_)))
    {
        return Err(Error::arg(
            "linear contact distribution needs rotation invariant bases (disc or segment)",
        ));
    }
    if eta.dim() != spec.dim() {
        return Err(Error::arg("direction dimension does not match the process"));
    }
    if r <= 0.0 {
        return Ok(0.0);
    }
    let rate = contact_constant(spec.dim(), spec.k()) * spec.mean_base_perimeter() * mean_det(spec, eta);
    Ok(-(-spec.intensity() * r * rate).exp_m1())
}

/// Spherical contact distribution `H_B(r)`.
pub fn spherical_cdf(spec: &ProcessSpec, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let lambda = spec.intensity();
    let exponent = if spec.section_dim() == 1 {
        2.0 * r
    } else {
        r * spec.mean_base_perimeter() + PI * r * r
    };
    -(-lambda * exponent).exp_m1()
}

/// Specific surface area (surface per unit volume) of the union set.
///
/// The inner integral over line directions is invariant under rotations of
/// `(L, K)` together, so it is evaluated once per base with `L` fixed and
/// averaged over the base law.
pub fn specific_surface(spec: &ProcessSpec) -> f64 {
    let d = spec.dim();
    let lambda = spec.intensity();
    let mut last = Vec3::zeros();
    last[d - 1] = 1.0;
    let l = spec.subspace(Direction::new(d, last).expect("axis"));
    let smooth_rule = haar_line_rule(d, &l.parameter().vector(), &[]);
    let inner: f64 = spec
        .components()
        .iter()
        .map(|(k, q)| {
            let rule = match k {
                CrossSection::Polygon(p) => polygon_line_rule(&l, p),
                _ => smooth_rule.clone(),
            };
            q * rule
                .iter()
                .map(|(xi, w)| w * derivative_term(&l, k, xi))
                .sum::<f64>()
        })
        .sum();
    -lambda * crofton_factor(d) * inner * (-lambda * spec.mean_base_area()).exp()
}

/// Haar rule on lines in space about the line `l`, with the azimuth in the
/// frame of `L^⊥` split where the polygon width is not smooth.
fn polygon_line_rule(l: &Subspace, p: &ConvexPolygon) -> Vec<(Vec3, f64)> {
    let v = p.vertices();
    let mut kinks = Vec::new();
    for i in 0..v.len() {
        let e = v[(i + 1) % v.len()] - v[i];
        let a = e.y.atan2(e.x).rem_euclid(2.0 * PI);
        kinks.push(a);
        kinks.push((a + PI).rem_euclid(2.0 * PI));
    }
    let pole = l.basis()[0];
    let (f1, f2) = (l.frame()[0], l.frame()[1]);
    let polar = gauss_legendre_on(HAAR_NODES_3D, 0.0, 0.5 * PI);
    let azimuth = gauss_legendre_pieces(HAAR_NODES_3D, 0.0, 2.0 * PI, &kinks);
    let mut rule = Vec::with_capacity(polar.len() * azimuth.len());
    for &(theta, wt) in &polar {
        let (st, ct) = theta.sin_cos();
        for &(phi, wp) in &azimuth {
            let (sp, cp) = phi.sin_cos();
            rule.push((pole * ct + (f1 * cp + f2 * sp) * st, wt * st * wp / (2.0 * PI)));
        }
    }
    rule
}

/// Specific surface of slabs (`k = d - 1`) of mean thickness `mean_thickness`.
pub fn specific_surface_slabs(lambda: f64, mean_thickness: f64) -> f64 {
    2.0 * lambda * (-lambda * mean_thickness).exp()
}

/// Specific surface of circular cylinders of radius `a` in space.
pub fn specific_surface_discs(lambda: f64, a: f64) -> f64 {
    2.0 * PI * a * lambda * (-lambda * PI * a * a).exp()
}

/// `exp(x^2 / 2) (1 - Phi(x))`, stable for large `x`.
fn scaled_normal_tail(x: f64) -> f64 {
    if x < 5.0 {
        0.5 * (0.5 * x * x).exp() * erfc(x * FRAC_1_SQRT_2)
    } else {
        // Mills ratio continued fraction.
        let mut f = x;
        for n in (1..200).rev() {
            f = x + n as f64 / f;
        }
        1.0 / (f * (2.0 * PI).sqrt())
    }
}

/// Mean, second moment and variance of the pore radius of spatial circular
/// cylinders with intensity `lambda` and mean base perimeter `c_s`.
pub fn pore_moments(lambda: f64, c_s: f64) -> Result<PoreMoments> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::arg(format!("intensity must be positive, got {lambda}")));
    }
    if !(c_s.is_finite() && c_s >= 0.0) {
        return Err(Error::arg(format!("mean perimeter must be >= 0, got {c_s}")));
    }
    let t = scaled_normal_tail(c_s * (lambda / (2.0 * PI)).sqrt());
    let mean = t / lambda.sqrt();
    let second_moment = 1.0 / (PI * lambda) - t * c_s / (PI * lambda.sqrt());
    Ok(PoreMoments {
        mean,
        second_moment,
        variance: second_moment - mean * mean,
    })
}

/// Largest mean perimeter for which the pore variance is certified to stay
/// below `eps`.
pub fn variance_bound_cs(lambda: f64, eps: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::arg(format!("intensity must be positive, got {lambda}")));
    }
    let floor = 1.0 / (PI * lambda);
    if !(eps >= floor) {
        return Err(Error::InfeasibleBudget { eps, floor });
    }
    Ok(2.0 * PI * (eps - floor).sqrt())
}
