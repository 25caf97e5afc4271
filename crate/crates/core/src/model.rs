//! Process descriptions: intensity, directional law and base law.

use crate::error::{Error, Result};
use crate::euclid::{haar_line_rule, orthonormal_complement, CrossSection, Direction, Subspace, Vec3};
use crate::quadrature::gauss_legendre_on;
use rand::Rng;
use std::f64::consts::PI;

/// Law of the directional parameter of a cylinder: the direction of `L` for
/// `k = 1`, the normal of `L` for `k = d - 1 >= 2`.
#[derive(Clone, Debug, PartialEq)]
pub enum DirectionalDistribution {
    Isotropic,
    FixedAxes(Vec<(Direction, f64)>),
    /// Uniform on the directions within latitude `max_latitude` of the great
    /// circle (line, in the plane) orthogonal to `axis`.
    GirdleBand { axis: Direction, max_latitude: f64 },
}

impl DirectionalDistribution {
    /// Discrete law; weights are normalised to sum to one.
    pub fn fixed_axes(axes: Vec<(Direction, f64)>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::process("fixed-axes law needs at least one axis"));
        }
        if axes.iter().any(|(_, w)| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::process("fixed-axes weights must be positive"));
        }
        let total: f64 = axes.iter().map(|(_, w)| w).sum();
        Ok(Self::FixedAxes(
            axes.into_iter().map(|(d, w)| (d, w / total)).collect(),
        ))
    }

    pub fn single_axis(dir: Direction) -> Self {
        Self::FixedAxes(vec![(dir, 1.0)])
    }

    pub fn girdle_band(axis: Direction, max_latitude: f64) -> Result<Self> {
        if !(max_latitude > 0.0 && max_latitude <= 0.5 * PI) {
            return Err(Error::process(format!(
                "girdle band latitude must lie in (0, pi/2], got {max_latitude}"
            )));
        }
        Ok(Self::GirdleBand { axis, max_latitude })
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let bad = |d: &Direction| d.dim() != dim;
        match self {
            Self::Isotropic => Ok(()),
            Self::FixedAxes(axes) if axes.iter().any(|(d, _)| bad(d)) => Err(Error::process(
                format!("fixed axis dimension does not match ambient dimension {dim}"),
            )),
            Self::GirdleBand { axis, .. } if bad(axis) => Err(Error::process(format!(
                "girdle axis dimension does not match ambient dimension {dim}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> Direction {
        let v = match self {
            Self::Isotropic => {
                if dim == 2 {
                    let phi = PI * rng.random::<f64>();
                    Vec3::new(phi.cos(), phi.sin(), 0.0)
                } else {
                    let z = 2.0 * rng.random::<f64>() - 1.0;
                    let phi = 2.0 * PI * rng.random::<f64>();
                    let s = (1.0 - z * z).max(0.0).sqrt();
                    Vec3::new(s * phi.cos(), s * phi.sin(), z)
                }
            }
            Self::FixedAxes(axes) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut chosen = axes[axes.len() - 1].0;
                for (d, w) in axes {
                    acc += w;
                    if u < acc {
                        chosen = *d;
                        break;
                    }
                }
                return chosen;
            }
            Self::GirdleBand { axis, max_latitude } => {
                let a = axis.vector();
                let comp = orthonormal_complement(dim, &a);
                if dim == 2 {
                    let beta = max_latitude * (2.0 * rng.random::<f64>() - 1.0);
                    a * beta.sin() + comp[0] * beta.cos()
                } else {
                    let s = max_latitude.sin();
                    let z = s * (2.0 * rng.random::<f64>() - 1.0);
                    let phi = 2.0 * PI * rng.random::<f64>();
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    a * z + (comp[0] * phi.cos() + comp[1] * phi.sin()) * r
                }
            }
        };
        Direction::new(dim, v).expect("sampled unit vector")
    }

    /// Quadrature rule `(direction, weight)` for expectations under the law.
    ///
    /// Discrete laws are summed exactly. For the isotropic law the rule is
    /// written about `pole` (default: last axis) with the polar range split
    /// at `polar_breaks`; girdle bands always use their own axis.
    pub fn rule(&self, dim: usize, pole: Option<&Vec3>, polar_breaks: &[f64]) -> Vec<(Vec3, f64)> {
        match self {
            Self::FixedAxes(axes) => axes.iter().map(|(d, w)| (d.vector(), *w)).collect(),
            Self::Isotropic => {
                let mut default = Vec3::zeros();
                default[dim - 1] = 1.0;
                haar_line_rule(dim, pole.unwrap_or(&default), polar_breaks)
            }
            Self::GirdleBand { axis, max_latitude } => {
                let a = axis.vector();
                let comp = orthonormal_complement(dim, &a);
                if dim == 2 {
                    gauss_legendre_on(crate::euclid::HAAR_NODES_2D, -max_latitude, *max_latitude)
                        .into_iter()
                        .map(|(b, w)| (a * b.sin() + comp[0] * b.cos(), w / (2.0 * max_latitude)))
                        .collect()
                } else {
                    let s = max_latitude.sin();
                    let n = crate::euclid::HAAR_NODES_3D;
                    let zs = gauss_legendre_on(n, 0.0, s);
                    let phis = gauss_legendre_on(n, 0.0, 2.0 * PI);
                    let mut out = Vec::with_capacity(n * n);
                    for &(z, wz) in &zs {
                        let r = (1.0 - z * z).max(0.0).sqrt();
                        for &(phi, wp) in &phis {
                            let dir = a * z + (comp[0] * phi.cos() + comp[1] * phi.sin()) * r;
                            out.push((dir, wz / s * wp / (2.0 * PI)));
                        }
                    }
                    out
                }
            }
        }
    }
}

/// Discrete law of the disc radius.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusLaw {
    atoms: Vec<(f64, f64)>,
}

impl RadiusLaw {
    /// Atoms `(radius, probability)`; probabilities are normalised.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::process("radius law needs at least one atom"));
        }
        for (i, (r, q)) in atoms.iter().enumerate() {
            if !(r.is_finite() && *r >= 0.0) {
                return Err(Error::process(format!("radius atom {i} must be >= 0, got {r}")));
            }
            if !(q.is_finite() && *q > 0.0) {
                return Err(Error::process(format!("radius atom {i} needs positive mass, got {q}")));
            }
            if atoms[..i].iter().any(|(s, _)| s == r) {
                return Err(Error::process(format!("radius {r} listed twice")));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        Ok(Self {
            atoms: atoms.into_iter().map(|(r, q)| (r, q / total)).collect(),
        })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|(r, q)| r * q).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.atoms.iter().map(|(r, q)| r * r * q).sum()
    }

    pub fn max_radius(&self) -> f64 {
        self.atoms.iter().map(|a| a.0).fold(0.0, f64::max)
    }
}

/// Law of the base, independent of the direction.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseDistribution {
    Deterministic(CrossSection),
    DiscRadiusLaw(RadiusLaw),
    Mixture(Vec<(CrossSection, f64)>),
}

impl BaseDistribution {
    /// Mixture with normalised weights.
    pub fn mixture(parts: Vec<(CrossSection, f64)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::process("mixture needs at least one component"));
        }
        if parts.iter().any(|(_, w)| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::process("mixture weights must be positive"));
        }
        let total: f64 = parts.iter().map(|p| p.1).sum();
        Ok(Self::Mixture(
            parts.into_iter().map(|(k, w)| (k, w / total)).collect(),
        ))
    }

    /// Support of the law as `(base, probability)` pairs.
    pub fn components(&self) -> Vec<(CrossSection, f64)> {
        match self {
            Self::Deterministic(k) => vec![(k.clone(), 1.0)],
            Self::DiscRadiusLaw(law) => law
                .atoms()
                .iter()
                .map(|&(r, q)| (CrossSection::Disc { radius: r }, q))
                .collect(),
            Self::Mixture(parts) => parts.clone(),
        }
    }
}

/// A stationary Poisson cylinder process.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessSpec {
    dim: usize,
    k: usize,
    intensity: f64,
    alpha: DirectionalDistribution,
    base: BaseDistribution,
    components: Vec<(CrossSection, f64)>,
}

impl ProcessSpec {
    pub fn new(
        dim: usize,
        k: usize,
        intensity: f64,
        alpha: DirectionalDistribution,
        base: BaseDistribution,
    ) -> Result<Self> {
        if !(intensity.is_finite() && intensity > 0.0) {
            return Err(Error::process(format!("intensity must be positive, got {intensity}")));
        }
        let spec = Self::build(dim, k, intensity, alpha, base)?;
        let p = spec.volume_fraction();
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::process(format!(
                "volume fraction must lie in (0, 1), got {p}"
            )));
        }
        Ok(spec)
    }

    fn build(
        dim: usize,
        k: usize,
        intensity: f64,
        alpha: DirectionalDistribution,
        base: BaseDistribution,
    ) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::process(format!("dimension must be 2 or 3, got {dim}")));
        }
        if !(k >= 1 && k < dim && (k == 1 || k == dim - 1)) {
            return Err(Error::process(format!("flat dimension must be 1 or d-1, got k={k}")));
        }
        alpha.validate(dim)?;
        let components = base.components();
        let section_dim = dim - k;
        for (kk, _) in &components {
            if kk.dim() != section_dim {
                return Err(Error::process(format!(
                    "{} base does not fit a {section_dim}-dimensional cross-section space",
                    kk.kind()
                )));
            }
        }
        if matches!(base, BaseDistribution::DiscRadiusLaw(_)) && section_dim != 2 {
            return Err(Error::process("disc radius laws need d - k = 2"));
        }
        let mean_area: f64 = components.iter().map(|(kk, w)| w * kk.area()).sum();
        if !(mean_area > 0.0) {
            return Err(Error::process("mean base area must be positive"));
        }
        Ok(Self {
            dim,
            k,
            intensity,
            alpha,
            base,
            components,
        })
    }

    /// The same shape distribution with intensity zero: the empty process.
    /// Only the simulator and estimators accept it.
    pub fn with_zero_intensity(&self) -> Self {
        Self {
            intensity: 0.0,
            ..self.clone()
        }
    }

    pub fn with_intensity(&self, intensity: f64) -> Result<Self> {
        Self::new(self.dim, self.k, intensity, self.alpha.clone(), self.base.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn section_dim(&self) -> usize {
        self.dim - self.k
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn alpha(&self) -> &DirectionalDistribution {
        &self.alpha
    }

    pub fn base(&self) -> &BaseDistribution {
        &self.base
    }

    pub fn components(&self) -> &[(CrossSection, f64)] {
        &self.components
    }

    pub fn mean_base_area(&self) -> f64 {
        self.components.iter().map(|(k, w)| w * k.area()).sum()
    }

    pub fn mean_base_perimeter(&self) -> f64 {
        self.components.iter().map(|(k, w)| w * k.perimeter()).sum()
    }

    /// Largest circumradius over the base support.
    pub fn max_circumradius(&self) -> f64 {
        self.components
            .iter()
            .map(|(k, _)| k.circumradius())
            .fold(0.0, f64::max)
    }

    /// `1 - exp(-lambda E[A])`.
    pub fn volume_fraction(&self) -> f64 {
        -(-self.intensity * self.mean_base_area()).exp_m1()
    }

    pub fn subspace(&self, param: Direction) -> Subspace {
        Subspace::from_parameter(self.k, param).expect("validated flat dimension")
    }
}

pub fn mean_base_area(spec: &ProcessSpec) -> f64 {
    spec.mean_base_area()
}

pub fn mean_base_perimeter(spec: &ProcessSpec) -> f64 {
    spec.mean_base_perimeter()
}

/// Draws a direction space from the directional law and, independently, a
/// base from the base law.
pub fn sample_shape<R: Rng + ?Sized>(spec: &ProcessSpec, rng: &mut R) -> (Subspace, CrossSection) {
    let dir = spec.alpha.sample(spec.dim, rng);
    let comps = &spec.components;
    let section = if comps.len() == 1 {
        comps[0].0.clone()
    } else {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = &comps[comps.len() - 1].0;
        for (k, w) in comps {
            acc += w;
            if u < acc {
                chosen = k;
                break;
            }
        }
        chosen.clone()
    };
    (spec.subspace(dir), section)
}
