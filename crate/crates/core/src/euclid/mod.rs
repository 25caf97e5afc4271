//! Low-dimensional Euclidean primitives.
//!
//! Points of `R^2` are stored as [`Vec3`] with a zero third coordinate, so a
//! single code path serves both ambient dimensions. Coordinates in the
//! orthogonal complement `L^⊥` of a direction space are stored as [`Vec2`];
//! when `L^⊥` is one-dimensional only the first component is used.

mod section;

pub use section::{
    covariogram, covariogram_derivative_at_origin, union_area_of_translates, ConvexPolygon,
    CrossSection,
};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre_on, gauss_legendre_pieces};
use std::f64::consts::PI;

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Vec2 = nalgebra::Vector2<f64>;

/// Normalisation tolerance.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance of geometric predicates (membership, clipping).
pub const GEOM_TOL: f64 = 1e-9;

/// Polar nodes of the planar Haar rule.
pub const HAAR_NODES_2D: usize = 129;
/// Polar and azimuthal nodes of the spherical Haar rule.
pub const HAAR_NODES_3D: usize = 65;

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::arg(format!("ambient dimension must be 2 or 3, got {dim}")))
    }
}

/// A non-oriented line through the origin, represented by a unit vector
/// whose first nonzero coordinate is positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    dim: usize,
    v: Vec3,
}

impl Direction {
    pub fn new(dim: usize, v: Vec3) -> Result<Self> {
        check_dim(dim)?;
        if dim == 2 && v.z != 0.0 {
            return Err(Error::arg("planar direction must have zero third coordinate"));
        }
        let n = v.norm();
        if !n.is_finite() || n <= NORM_TOL {
            return Err(Error::arg(format!("cannot normalise vector {:?}", v.as_slice())));
        }
        // Already-unit input is kept bit-for-bit so that canonicalisation is
        // idempotent and exported directions re-import exactly.
        let mut u = if (n - 1.0).abs() <= f64::EPSILON { v } else { v / n };
        if let Some(first) = u.iter().copied().find(|c| c.abs() > NORM_TOL) {
            if first < 0.0 {
                u = -u;
            }
        }
        // Avoid negative zeros leaking into serialized output.
        u.iter_mut().for_each(|c| {
            if *c == 0.0 {
                *c = 0.0
            }
        });
        Ok(Self { dim, v: u })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        match coords {
            [x, y] => Self::new(2, Vec3::new(*x, *y, 0.0)),
            [x, y, z] => Self::new(3, Vec3::new(*x, *y, *z)),
            _ => Err(Error::arg(format!(
                "direction needs 2 or 3 coordinates, got {}",
                coords.len()
            ))),
        }
    }

    /// Unit coordinate vector `e_{i+1}`.
    pub fn axis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::arg(format!("axis {i} out of range for dimension {dim}")));
        }
        let mut v = Vec3::zeros();
        v[i] = 1.0;
        Self::new(dim, v)
    }

    /// Planar direction at angle `phi` from the first axis.
    pub fn planar(phi: f64) -> Self {
        Self::new(2, Vec3::new(phi.cos(), phi.sin(), 0.0)).expect("unit vector")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self) -> Vec3 {
        self.v
    }

    pub fn coords(&self) -> &[f64] {
        &self.v.as_slice()[..self.dim]
    }
}

/// A linear subspace of dimension 1 or `ambient - 1` together with the
/// canonical orthonormal frame of its orthogonal complement.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    dim: usize,
    basis: [Vec3; 2],
    frame: [Vec3; 2],
    pole: Direction,
}

impl Subspace {
    /// The line spanned by `dir`.
    pub fn line(dir: Direction) -> Self {
        let ambient = dir.dim();
        let u = dir.vector();
        let comp = complete_basis(ambient, &[u]);
        let mut frame = [Vec3::zeros(); 2];
        frame[..comp.len()].copy_from_slice(&comp);
        Self {
            ambient,
            dim: 1,
            basis: [u, Vec3::zeros()],
            frame,
            pole: dir,
        }
    }

    /// The hyperplane with unit normal `normal`.
    pub fn hyperplane(normal: Direction) -> Self {
        let ambient = normal.dim();
        let n = normal.vector();
        let within = complete_basis(ambient, &[n]);
        let mut basis = [Vec3::zeros(); 2];
        basis[..within.len()].copy_from_slice(&within);
        let comp = complete_basis(ambient, &within);
        let mut frame = [Vec3::zeros(); 2];
        frame[..comp.len()].copy_from_slice(&comp);
        Self {
            ambient,
            dim: ambient - 1,
            basis,
            frame,
            pole: normal,
        }
    }

    /// Direction space of a `k`-cylinder from its directional parameter: the
    /// line direction when `k = 1`, the normal when `k = d - 1 >= 2`.
    pub fn from_parameter(k: usize, dir: Direction) -> Result<Self> {
        let d = dir.dim();
        if k == 1 {
            Ok(Self::line(dir))
        } else if k + 1 == d {
            Ok(Self::hyperplane(dir))
        } else {
            Err(Error::arg(format!("unsupported flat dimension k={k} in d={d}")))
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn perp_dim(&self) -> usize {
        self.ambient - self.dim
    }

    pub fn basis(&self) -> &[Vec3] {
        &self.basis[..self.dim]
    }

    /// Canonical frame of the orthogonal complement.
    pub fn frame(&self) -> &[Vec3] {
        &self.frame[..self.perp_dim()]
    }

    /// The directional parameter this subspace was built from: the line
    /// itself for `k = 1`, the normal otherwise.
    pub fn parameter(&self) -> Direction {
        self.pole
    }

    /// Coordinates of `x - Pr_L(x)` in the canonical frame of `L^⊥`.
    #[inline]
    pub fn project_along(&self, x: &Vec3) -> Vec2 {
        let u = self.frame[0].dot(x);
        let v = if self.ambient - self.dim == 2 {
            self.frame[1].dot(x)
        } else {
            0.0
        };
        Vec2::new(u, v)
    }

    /// Inverse of [`Self::project_along`] on `L^⊥`.
    pub fn embed(&self, c: &Vec2) -> Vec3 {
        let mut x = self.frame[0] * c.x;
        if self.perp_dim() == 2 {
            x += self.frame[1] * c.y;
        }
        x
    }

    /// Orthogonal projection onto `L` itself.
    pub fn project_onto(&self, x: &Vec3) -> Vec3 {
        self.basis().iter().map(|b| b * b.dot(x)).sum()
    }
}

/// Extends the orthonormal set `given` to an orthonormal basis of `R^dim`
/// and returns the added vectors. Candidates are the coordinate axes; at
/// each step the axis with the largest residual wins, lowest index first on
/// ties, which makes the frame a deterministic function of the input.
fn complete_basis(dim: usize, given: &[Vec3]) -> Vec<Vec3> {
    let mut chosen: Vec<Vec3> = Vec::new();
    while given.len() + chosen.len() < dim {
        let mut best: Option<(f64, Vec3)> = None;
        for i in 0..dim {
            let mut r = Vec3::zeros();
            r[i] = 1.0;
            for b in given.iter().chain(chosen.iter()) {
                r -= b * b.dot(&r);
            }
            let n = r.norm();
            if best.map_or(true, |(bn, _)| n > bn) {
                best = Some((n, r));
            }
        }
        let (n, r) = best.expect("dimension >= 1");
        let mut r = r / n;
        // One re-orthogonalisation pass keeps the frame orthonormal to 1e-15.
        for b in given.iter().chain(chosen.iter()) {
            r -= b * b.dot(&r);
        }
        chosen.push(r / r.norm());
    }
    chosen
}

/// `[xi, eta]`: volume of the parallelepiped spanned by an orthonormal basis
/// of `xi` and the unit vector `eta`, i.e. the length of the component of
/// `eta` orthogonal to `xi`.
pub fn subspace_det(xi: &Subspace, eta: &Direction) -> f64 {
    subspace_det_vec(xi, &eta.vector())
}

#[inline]
pub(crate) fn subspace_det_vec(xi: &Subspace, eta: &Vec3) -> f64 {
    let c = xi.project_along(eta);
    c.norm().min(1.0)
}

/// See [`Subspace::project_along`].
pub fn project_along(x: &Vec3, l: &Subspace) -> Vec2 {
    l.project_along(x)
}

/// Volume `kappa_m` and surface area `omega_m` of the unit `m`-ball.
pub fn ball_constants(m: usize) -> Result<(f64, f64)> {
    match m {
        0 => Ok((1.0, 0.0)),
        1 => Ok((2.0, 2.0)),
        2 => Ok((PI, 2.0 * PI)),
        3 => Ok((4.0 * PI / 3.0, 4.0 * PI)),
        _ => Err(Error::arg(format!("ball constants only for m in 0..=3, got {m}"))),
    }
}

pub(crate) fn kappa(m: usize) -> f64 {
    ball_constants(m).expect("m <= 3").0
}

/// `d kappa_d / kappa_{d-1}`: the factor converting line-section intensities
/// into specific surface area.
pub fn crofton_factor(d: usize) -> f64 {
    d as f64 * kappa(d) / kappa(d - 1)
}

/// Any unit vector orthogonal to `u` in `R^dim` (deterministic).
pub(crate) fn orthonormal_complement(dim: usize, u: &Vec3) -> Vec<Vec3> {
    complete_basis(dim, &[*u])
}

/// Quadrature rule for the Haar probability measure on `G(1, dim)` written
/// in spherical coordinates about `pole`.
///
/// In the plane the polar angle `psi` runs over `[0, pi)`; in space the polar
/// angle `theta` runs over `[0, pi/2]` (one representative per line) and the
/// azimuth over `[0, 2 pi)`. The polar range is additionally split at
/// `polar_breaks` (and at `pi/2` in the plane) so that integrands with kinks
/// at known polar angles are integrated piecewise-smoothly.
pub fn haar_line_rule(dim: usize, pole: &Vec3, polar_breaks: &[f64]) -> Vec<(Vec3, f64)> {
    let pole = pole.normalize();
    let comp = orthonormal_complement(dim, &pole);
    match dim {
        2 => {
            let mut breaks = polar_breaks.to_vec();
            breaks.push(0.5 * PI);
            let q = comp[0];
            gauss_legendre_pieces(HAAR_NODES_2D, 0.0, PI, &breaks)
                .into_iter()
                .map(|(psi, w)| (pole * psi.cos() + q * psi.sin(), w / PI))
                .collect()
        }
        3 => {
            let (f1, f2) = (comp[0], comp[1]);
            let polar = gauss_legendre_pieces(HAAR_NODES_3D, 0.0, 0.5 * PI, polar_breaks);
            let azimuth = gauss_legendre_on(HAAR_NODES_3D, 0.0, 2.0 * PI);
            let mut rule = Vec::with_capacity(polar.len() * azimuth.len());
            for &(theta, wt) in &polar {
                let (st, ct) = theta.sin_cos();
                for &(phi, wp) in &azimuth {
                    let (sp, cp) = phi.sin_cos();
                    let dir = pole * ct + (f1 * cp + f2 * sp) * st;
                    rule.push((dir, wt * st * wp / (2.0 * PI)));
                }
            }
            rule
        }
        _ => panic!("unsupported dimension {dim}"),
    }
}

/// `∫_{G(1,d)} [xi', xi] dxi'` under the Haar probability measure.
pub fn grassmann_average_det(d: usize, xi: &Subspace) -> Result<f64> {
    check_dim(d)?;
    if xi.ambient() != d || xi.dim() != 1 {
        return Err(Error::arg("grassmann_average_det expects a line in R^d"));
    }
    let pole = xi.basis()[0];
    Ok(haar_line_rule(d, &pole, &[])
        .iter()
        .map(|(dir, w)| w * subspace_det_vec(xi, dir))
        .sum())
}
