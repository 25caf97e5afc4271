//! Exact simulation of the union set inside a bounded window.
//!
//! A realization holds every cylinder of the process that hits the window,
//! so membership is exact everywhere in the window. Distances are exact only
//! where no cylinder missing the window can be closer, which callers ensure
//! by eroding the window.

mod cylinder;
mod grid;
mod window;

pub use cylinder::PlacedCylinder;
pub use window::Window;

use crate::error::{Error, Result};
use crate::euclid::{ConvexPolygon, CrossSection, Direction, Vec2, Vec3};
use crate::model::{sample_shape, ProcessSpec};
use crate::rng::{stream, Stream};
use grid::Grid;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::sync::OnceLock;

/// The cylinders of one realization that hit the window.
#[derive(Clone, Debug)]
pub struct Realization {
    spec: ProcessSpec,
    window: Window,
    cylinders: Vec<PlacedCylinder>,
    seed: u64,
    grid: OnceLock<Grid>,
}

impl PartialEq for Realization {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self.window == other.window
            && self.cylinders == other.cylinders
            && self.seed == other.seed
    }
}

/// Samples the cylinders hitting `window` using RNG stream 0 of `seed`.
pub fn sample_realization(spec: &ProcessSpec, window: &Window, seed: u64) -> Result<Realization> {
    let mut rng = stream(seed, 0);
    sample_with(spec, window, seed, &mut rng)
}

/// As [`sample_realization`], drawing from an explicit stream.
pub fn sample_realization_on(
    spec: &ProcessSpec,
    window: &Window,
    seed: u64,
    stream_id: u64,
) -> Result<Realization> {
    let mut rng = stream(seed, stream_id);
    sample_with(spec, window, seed, &mut rng)
}

/// Radius of the offset region: window circumradius plus the largest base
/// circumradius, so it covers `Pr_L(W) ⊕ (-K)` for every shape.
pub fn sampling_radius(spec: &ProcessSpec, window: &Window) -> f64 {
    window.circumradius() + spec.max_circumradius()
}

fn sample_with(spec: &ProcessSpec, window: &Window, seed: u64, rng: &mut Stream) -> Result<Realization> {
    if window.dim() != spec.dim() {
        return Err(Error::arg(format!(
            "window dimension {} does not match process dimension {}",
            window.dim(),
            spec.dim()
        )));
    }
    let rho = sampling_radius(spec, window);
    if !rho.is_finite() {
        return Err(Error::process("base support is unbounded"));
    }
    let measure = if spec.section_dim() == 1 {
        2.0 * rho
    } else {
        PI * rho * rho
    };
    let mean = spec.intensity() * measure;
    let n = if mean > 0.0 {
        Poisson::new(mean)
            .map_err(|e| Error::process(format!("cannot draw Poisson count: {e}")))?
            .sample(rng) as usize
    } else {
        0
    };
    let center = window.center();
    let corners = window.corners();
    let mut cylinders = Vec::new();
    for _ in 0..n {
        let (l, k) = sample_shape(spec, rng);
        let c = l.project_along(&center);
        let offset = if spec.section_dim() == 1 {
            Vec2::new(c.x + rho * (2.0 * rng.random::<f64>() - 1.0), 0.0)
        } else {
            let r = rho * rng.random::<f64>().sqrt();
            let phi = 2.0 * PI * rng.random::<f64>();
            c + Vec2::new(r * phi.cos(), r * phi.sin())
        };
        let cyl = PlacedCylinder::new(l, k, offset);
        if hits_window(&cyl, &corners) {
            cylinders.push(cyl);
        }
    }
    Ok(Realization {
        spec: spec.clone(),
        window: *window,
        cylinders,
        seed,
        grid: OnceLock::new(),
    })
}

/// Whether the cylinder meets the window with the given corners.
pub fn hits_window(cyl: &PlacedCylinder, corners: &[Vec3]) -> bool {
    let proj: Vec<Vec2> = corners
        .iter()
        .map(|x| cyl.subspace.project_along(x) - cyl.offset)
        .collect();
    match &cyl.section {
        CrossSection::Segment { half_length } => {
            let lo = proj.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
            let hi = proj.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
            lo <= *half_length && hi >= -half_length
        }
        CrossSection::Disc { radius } => {
            let hull = convex_hull(proj);
            distance_to_hull(&hull, &Vec2::zeros()) <= *radius
        }
        CrossSection::Polygon(p) => {
            let hull = convex_hull(proj);
            convex_overlap(&hull, p.vertices())
        }
    }
}

/// Counterclockwise convex hull without collinear points.
fn convex_hull(mut pts: Vec<Vec2>) -> Vec<Vec2> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &Vec2, a: &Vec2, b: &Vec2| (a - o).perp(&(b - o));
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    hull
}

fn distance_to_hull(hull: &[Vec2], p: &Vec2) -> f64 {
    let seg = |a: &Vec2, b: &Vec2| {
        let ab = b - a;
        let l2 = ab.norm_squared();
        let t = if l2 > 0.0 { ((p - a).dot(&ab) / l2).clamp(0.0, 1.0) } else { 0.0 };
        (p - (a + ab * t)).norm()
    };
    match hull.len() {
        0 => f64::INFINITY,
        1 => (p - hull[0]).norm(),
        2 => seg(&hull[0], &hull[1]),
        n => {
            let inside = (0..n).all(|i| (hull[(i + 1) % n] - hull[i]).perp(&(p - hull[i])) >= 0.0);
            if inside {
                0.0
            } else {
                (0..n).map(|i| seg(&hull[i], &hull[(i + 1) % n])).fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Separating-axis test for two convex polygons (touching counts as overlap).
fn convex_overlap(a: &[Vec2], b: &[Vec2]) -> bool {
    let separated_along = |poly: &[Vec2]| {
        let n = poly.len();
        (0..n).any(|i| {
            let e = poly[(i + 1) % n] - poly[i];
            let axis = Vec2::new(-e.y, e.x);
            let range = |q: &[Vec2]| {
                q.iter()
                    .map(|v| v.dot(&axis))
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), s| (l.min(s), h.max(s)))
            };
            let (al, ah) = range(a);
            let (bl, bh) = range(b);
            ah < bl || bh < al
        })
    };
    if a.len() < 2 {
        return a.iter().any(|p| point_in_convex(b, p));
    }
    !(separated_along(a) || separated_along(b))
}

fn point_in_convex(poly: &[Vec2], p: &Vec2) -> bool {
    let n = poly.len();
    (0..n).all(|i| (poly[(i + 1) % n] - poly[i]).perp(&(p - poly[i])) >= 0.0)
}

impl Realization {
    /// Assembles a realization from explicit cylinders (used for replay and
    /// hand-built configurations).
    pub fn from_parts(
        spec: &ProcessSpec,
        window: &Window,
        cylinders: Vec<PlacedCylinder>,
        seed: u64,
    ) -> Result<Self> {
        if window.dim() != spec.dim() {
            return Err(Error::arg("window dimension does not match process dimension"));
        }
        for (i, c) in cylinders.iter().enumerate() {
            if c.subspace.ambient() != spec.dim()
                || c.subspace.dim() != spec.k()
                || c.section.dim() != spec.section_dim()
            {
                return Err(Error::Format(format!(
                    "cylinder {i} does not match the process dimensions"
                )));
            }
        }
        Ok(Self {
            spec: spec.clone(),
            window: *window,
            cylinders,
            seed,
            grid: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &ProcessSpec {
        &self.spec
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn cylinders(&self) -> &[PlacedCylinder] {
        &self.cylinders
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn grid(&self) -> &Grid {
        self.grid
            .get_or_init(|| Grid::build(&self.window, &self.cylinders, self.spec.max_circumradius()))
    }

    fn check_inside(&self, x: &Vec3) -> Result<()> {
        if self.window.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideWindow(format!("point {:?}", &x.as_slice()[..self.window.dim()])))
        }
    }

    /// Whether `x` lies in the union set.
    pub fn contains(&self, x: &Vec3) -> Result<bool> {
        self.check_inside(x)?;
        Ok(self.contains_unchecked(x))
    }

    #[inline]
    pub(crate) fn contains_unchecked(&self, x: &Vec3) -> bool {
        self.grid()
            .candidates(x)
            .iter()
            .any(|&i| self.cylinders[i as usize].contains(x))
    }

    /// Distance from `x` to the union set (infinite when the realization is
    /// empty).
    pub fn distance_to_union(&self, x: &Vec3) -> Result<f64> {
        self.check_inside(x)?;
        Ok(self.distance_unchecked(x))
    }

    pub(crate) fn distance_unchecked(&self, x: &Vec3) -> f64 {
        if self.contains_unchecked(x) {
            return 0.0;
        }
        self.cylinders
            .iter()
            .map(|c| c.distance(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Merged intervals `[t_in, t_out] ⊂ [0, length]` where
    /// `origin + t dir` lies in the union set.
    pub fn ray_intervals(&self, origin: &Vec3, dir: &Direction, length: f64) -> Result<Vec<(f64, f64)>> {
        if !(length.is_finite() && length >= 0.0) {
            return Err(Error::arg(format!("ray length must be >= 0, got {length}")));
        }
        if dir.dim() != self.window.dim() {
            return Err(Error::arg("ray direction dimension does not match the window"));
        }
        let v = dir.vector();
        self.check_inside(origin)?;
        self.check_inside(&(origin + v * length))
            .map_err(|_| Error::OutsideWindow("ray segment leaves the window".into()))?;
        Ok(self.intervals_unchecked(origin, &v, length))
    }

    pub(crate) fn intervals_unchecked(&self, origin: &Vec3, v: &Vec3, length: f64) -> Vec<(f64, f64)> {
        let mut iv: Vec<(f64, f64)> = self
            .cylinders
            .iter()
            .filter_map(|c| c.line_interval(origin, v))
            .map(|(a, b)| (a.max(0.0), b.min(length)))
            .filter(|(a, b)| b > a)
            .collect();
        iv.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
        for (a, b) in iv {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        merged
    }

    /// Writes the cylinders as CSV.
    ///
    /// Columns: `cyl_id`, the directional parameter (`axis_*`: line
    /// direction for `k = 1`, normal for `k = d - 1`), the offset in the
    /// canonical frame of `L^⊥` (`offset_u`, plus `offset_v` in space), the
    /// shape name and its parameters: half length (segment), radius (disc)
    /// or centred vertex coordinates `x1,y1,x2,y2,...` (polygon). Planar
    /// files drop `axis_z` and `offset_v`. Numbers use the shortest
    /// representation that parses back to the same double.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        let planar = self.window.dim() == 2;
        let header: &[&str] = if planar {
            &["cyl_id", "axis_x", "axis_y", "offset_u", "shape", "param"]
        } else {
            &["cyl_id", "axis_x", "axis_y", "axis_z", "offset_u", "offset_v", "shape", "param"]
        };
        w.write_record(header).map_err(csv_err)?;
        for (i, c) in self.cylinders.iter().enumerate() {
            let mut rec = vec![i.to_string()];
            rec.extend(c.subspace.parameter().coords().iter().map(|x| x.to_string()));
            rec.push(c.offset.x.to_string());
            if !planar {
                rec.push(c.offset.y.to_string());
            }
            rec.push(c.section.kind().to_string());
            match &c.section {
                CrossSection::Segment { half_length } => rec.push(half_length.to_string()),
                CrossSection::Disc { radius } => rec.push(radius.to_string()),
                CrossSection::Polygon(p) => {
                    for v in p.vertices() {
                        rec.push(v.x.to_string());
                        rec.push(v.y.to_string());
                    }
                }
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Reads cylinders written by [`Self::write_csv`].
    pub fn read_csv<R: Read>(input: R, spec: &ProcessSpec, window: &Window, seed: u64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(input);
        let planar = spec.dim() == 2;
        let fixed = if planar { 5 } else { 7 };
        let mut cylinders = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            let bad = |what: &str| Error::Format(format!("row {}: {what}", row + 1));
            if rec.len() < fixed + 1 {
                return Err(bad("too few fields"));
            }
            let num = |i: usize| -> Result<f64> {
                rec[i]
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| bad(&format!("field {} is not a number: {:?}", i + 1, &rec[i])))
            };
            let d = spec.dim();
            let axis: Vec<f64> = (1..=d).map(num).collect::<Result<_>>()?;
            let dir = Direction::from_slice(&axis).map_err(|e| bad(&e.to_string()))?;
            let offset = if planar {
                Vec2::new(num(d + 1)?, 0.0)
            } else {
                Vec2::new(num(d + 1)?, num(d + 2)?)
            };
            let params: Vec<f64> = (fixed..rec.len()).map(num).collect::<Result<_>>()?;
            let shape = &rec[fixed - 1];
            let section = match (shape, params.as_slice()) {
                ("segment", [a]) => CrossSection::segment(*a),
                ("disc", [r]) => CrossSection::disc(*r),
                ("polygon", v) if v.len() >= 6 && v.len() % 2 == 0 => {
                    let verts = v.chunks(2).map(|c| Vec2::new(c[0], c[1])).collect();
                    ConvexPolygon::from_centered(verts).map(CrossSection::Polygon)
                }
                _ => return Err(bad(&format!("bad shape {shape:?} with {} parameters", params.len()))),
            }
            .map_err(|e| bad(&e.to_string()))?;
            cylinders.push(PlacedCylinder::new(spec.subspace(dir), section, offset));
        }
        Self::from_parts(spec, window, cylinders, seed)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}
