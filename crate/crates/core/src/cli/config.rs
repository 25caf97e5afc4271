//! JSON run configuration.

use crate::error::{Error, Result};
use crate::euclid::{CrossSection, Direction, Vec2, Vec3};
use crate::model::{BaseDistribution, DirectionalDistribution, ProcessSpec, RadiusLaw};
use crate::sim::Window;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spec: Option<SpecDoc>,
    pub window: Option<WindowDoc>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    /// Lags for covariance evaluation and estimation.
    pub lags: Option<Vec<Vec<f64>>>,
    /// Radii for the spherical contact distribution.
    pub radii: Option<Vec<f64>>,
    /// Test direction of the linear contact distribution.
    pub eta: Option<Vec<f64>>,
    /// Radii for the linear contact distribution (default: `radii`).
    pub linear_radii: Option<Vec<f64>>,
    pub n_points: Option<usize>,
    pub n_reps: Option<usize>,
    pub n_lines: Option<usize>,
    pub n_dirs: Option<usize>,
    pub step: Option<f64>,
    pub richardson: Option<bool>,
    pub r_cap: Option<f64>,
    /// Estimators to run; by default every estimator whose inputs are given.
    pub estimators: Option<Vec<EstimatorKind>>,
    pub design: Option<DesignDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    VolumeFraction,
    Covariance,
    SphericalCdf,
    LinearCdf,
    SurfaceLinescan,
    SurfaceCovderiv,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub d: usize,
    pub k: usize,
    pub lambda: f64,
    pub alpha: AlphaDoc,
    pub base: BaseDoc,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlphaDoc {
    Isotropic,
    FixedAxes { axes: Vec<AxisDoc> },
    GirdleBand { axis: Vec<f64>, max_latitude: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisDoc {
    pub dir: Vec<f64>,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseDoc {
    Deterministic { section: SectionDoc },
    DiscRadiusLaw { law: Vec<(f64, f64)> },
    Mixture { components: Vec<ComponentDoc> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub section: SectionDoc,
    pub weight: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum SectionDoc {
    Segment { half_length: f64 },
    Disc { radius: f64 },
    Polygon { vertices: Vec<(f64, f64)> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowDoc {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignDoc {
    pub lambda: f64,
    pub eps: f64,
    pub r_max: f64,
    #[serde(default)]
    pub n_random: usize,
}

impl RunConfig {
    /// Parses JSON, reporting the path of the offending field on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." || path.is_empty() {
                Error::arg(format!("config: {inner}"))
            } else {
                Error::arg(format!("config field `{path}`: {inner}"))
            }
        })
    }

    pub fn process(&self) -> Result<ProcessSpec> {
        let doc = self
            .spec
            .as_ref()
            .ok_or_else(|| Error::arg("config field `spec` is required"))?;
        doc.build().map_err(|e| Error::arg(format!("config field `spec`: {e}")))
    }

    pub fn window(&self) -> Result<Window> {
        let w = self
            .window
            .as_ref()
            .ok_or_else(|| Error::arg("config field `window` is required"))?;
        Window::new(&w.lo, &w.hi).map_err(|e| Error::arg(format!("config field `window`: {e}")))
    }

    pub fn lags(&self, dim: usize) -> Result<Vec<Vec3>> {
        self.lags
            .iter()
            .flatten()
            .enumerate()
            .map(|(i, h)| point(h, dim).map_err(|e| Error::arg(format!("config field `lags[{i}]`: {e}"))))
            .collect()
    }

    pub fn eta(&self, dim: usize) -> Result<Option<Direction>> {
        self.eta
            .as_ref()
            .map(|v| {
                let d = Direction::from_slice(v)
                    .map_err(|e| Error::arg(format!("config field `eta`: {e}")))?;
                if d.dim() != dim {
                    return Err(Error::arg(format!("config field `eta`: expected {dim} coordinates")));
                }
                Ok(d)
            })
            .transpose()
    }
}

fn point(c: &[f64], dim: usize) -> Result<Vec3> {
    if c.len() != dim {
        return Err(Error::arg(format!("expected {dim} coordinates, got {}", c.len())));
    }
    let mut v = Vec3::zeros();
    v.as_mut_slice()[..dim].copy_from_slice(c);
    Ok(v)
}

impl SpecDoc {
    fn build(&self) -> Result<ProcessSpec> {
        let alpha = match &self.alpha {
            AlphaDoc::Isotropic => DirectionalDistribution::Isotropic,
            AlphaDoc::FixedAxes { axes } => DirectionalDistribution::fixed_axes(
                axes.iter()
                    .map(|a| Ok((Direction::from_slice(&a.dir)?, a.weight)))
                    .collect::<Result<_>>()?,
            )?,
            AlphaDoc::GirdleBand { axis, max_latitude } => {
                DirectionalDistribution::girdle_band(Direction::from_slice(axis)?, *max_latitude)?
            }
        };
        let base = match &self.base {
            BaseDoc::Deterministic { section } => BaseDistribution::Deterministic(section.build()?),
            BaseDoc::DiscRadiusLaw { law } => BaseDistribution::DiscRadiusLaw(RadiusLaw::new(law.clone())?),
            BaseDoc::Mixture { components } => BaseDistribution::mixture(
                components
                    .iter()
                    .map(|c| Ok((c.section.build()?, c.weight)))
                    .collect::<Result<_>>()?,
            )?,
        };
        ProcessSpec::new(self.d, self.k, self.lambda, alpha, base)
    }
}

impl SectionDoc {
    fn build(&self) -> Result<CrossSection> {
        match self {
            SectionDoc::Segment { half_length } => CrossSection::segment(*half_length),
            SectionDoc::Disc { radius } => CrossSection::disc(*radius),
            SectionDoc::Polygon { vertices } => {
                CrossSection::polygon(vertices.iter().map(|&(x, y)| Vec2::new(x, y)).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DISC: &str = r#"{
        "spec": {"d": 3, "k": 1, "lambda": 0.1,
                 "alpha": {"type": "isotropic"},
                 "base": {"type": "deterministic", "section": {"shape": "disc", "radius": 1.0}}},
        "window": {"lo": [0, 0, 0], "hi": [20, 20, 20]}
    }"#;

    #[test]
    fn parses_reference_config() {
        let c = RunConfig::from_json(DISC).unwrap();
        let s = c.process().unwrap();
        assert_eq!((s.dim(), s.k(), s.intensity()), (3, 1, 0.1));
        assert_eq!(c.window().unwrap().volume(), 8000.0);
    }

    #[test]
    fn errors_name_fields() {
        let bad = DISC.replace("\"radius\": 1.0", "\"radius\": \"one\"");
        let e = RunConfig::from_json(&bad).unwrap_err().to_string();
        assert!(e.contains("spec.base"), "{e}");
        let unknown = DISC.replace("\"lambda\": 0.1", "\"lambda\": 0.1, \"lamda\": 2");
        let e = RunConfig::from_json(&unknown).unwrap_err().to_string();
        assert!(e.contains("lamda"), "{e}");
        let zero = DISC.replace("\"lambda\": 0.1", "\"lambda\": 0");
        let e = RunConfig::from_json(&zero).unwrap().process().unwrap_err().to_string();
        assert!(e.contains("intensity"), "{e}");
        assert!(RunConfig::from_json("{not json").is_err());
    }

    #[test]
    fn other_laws_parse() {
        let text = r#"{"spec": {"d": 3, "k": 1, "lambda": 0.1,
            "alpha": {"type": "fixed_axes", "axes": [{"dir": [0, 0, 1], "weight": 2}, {"dir": [1, 0, 0]}]},
            "base": {"type": "mixture", "components": [
                {"section": {"shape": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]}, "weight": 1},
                {"section": {"shape": "disc", "radius": 0.5}, "weight": 1}]}}}"#;
        let s = RunConfig::from_json(text).unwrap().process().unwrap();
        assert_eq!(s.components().len(), 2);
        let text = r#"{"spec": {"d": 3, "k": 1, "lambda": 0.1,
            "alpha": {"type": "girdle_band", "axis": [0, 0, 1], "max_latitude": 0.2},
            "base": {"type": "disc_radius_law", "law": [[0, 0.5], [2, 0.5]]}}}"#;
        assert!(RunConfig::from_json(text).unwrap().process().is_ok());
    }
}
