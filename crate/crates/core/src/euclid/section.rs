//! Cross sections (bases) of cylinders and their covariograms.

use super::{Vec2, GEOM_TOL, NORM_TOL};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Base of a cylinder in canonical coordinates of `L^⊥`, centred at the
/// centre of its circumscribed ball.
///
/// Segments live on the first coordinate axis of a one-dimensional `L^⊥`;
/// discs and polygons live in a two-dimensional `L^⊥`. A disc of radius 0
/// is allowed: it is the degenerate base of a zero-thickness fiber, which
/// covers no volume but still counts for contact distances.
#[derive(Clone, Debug, PartialEq)]
pub enum CrossSection {
    Segment { half_length: f64 },
    Disc { radius: f64 },
    Polygon(ConvexPolygon),
}

/// Convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
    circumradius: f64,
}

impl CrossSection {
    pub fn segment(half_length: f64) -> Result<Self> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::geometry(format!(
                "segment half length must be positive, got {half_length}"
            )));
        }
        Ok(Self::Segment { half_length })
    }

    pub fn disc(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::geometry(format!("disc radius must be >= 0, got {radius}")));
        }
        Ok(Self::Disc { radius })
    }

    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self> {
        ConvexPolygon::new(vertices).map(Self::Polygon)
    }

    /// Dimension of the space the base lives in (`d - k`).
    pub fn dim(&self) -> usize {
        match self {
            Self::Segment { .. } => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Segment { .. } => "segment",
            Self::Disc { .. } => "disc",
            Self::Polygon(_) => "polygon",
        }
    }

    /// `(d-k)`-volume: length of a segment, area otherwise.
    pub fn area(&self) -> f64 {
        match self {
            Self::Segment { half_length } => 2.0 * half_length,
            Self::Disc { radius } => PI * radius * radius,
            Self::Polygon(p) => p.area(),
        }
    }

    /// Boundary measure: 2 endpoints for a segment, perimeter otherwise.
    pub fn perimeter(&self) -> f64 {
        match self {
            Self::Segment { .. } => 2.0,
            Self::Disc { radius } => 2.0 * PI * radius,
            Self::Polygon(p) => p.perimeter(),
        }
    }

    pub fn circumradius(&self) -> f64 {
        match self {
            Self::Segment { half_length } => *half_length,
            Self::Disc { radius } => *radius,
            Self::Polygon(p) => p.circumradius,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Self::Segment { half_length } => 2.0 * half_length,
            Self::Disc { radius } => 2.0 * radius,
            Self::Polygon(p) => p.diameter(),
        }
    }

    /// Point reflection `-K`.
    pub fn reflected(&self) -> Self {
        match self {
            Self::Polygon(p) => Self::Polygon(ConvexPolygon {
                vertices: p.vertices.iter().map(|v| -v).collect(),
                circumradius: p.circumradius,
            }),
            other => other.clone(),
        }
    }

    #[inline]
    pub fn contains(&self, p: &Vec2, tol: f64) -> bool {
        match self {
            Self::Segment { half_length } => p.x.abs() <= half_length + tol,
            Self::Disc { radius } => p.norm_squared() <= (radius + tol) * (radius + tol),
            Self::Polygon(poly) => poly.contains(p, tol),
        }
    }

    /// Euclidean distance from `p` to the base (0 inside).
    #[inline]
    pub fn distance(&self, p: &Vec2) -> f64 {
        match self {
            Self::Segment { half_length } => (p.x.abs() - half_length).max(0.0),
            Self::Disc { radius } => (p.norm() - radius).max(0.0),
            Self::Polygon(poly) => poly.distance(p),
        }
    }

    /// Parameter interval `[t_in, t_out]` of `{t : p0 + t v ∈ K}`.
    ///
    /// Returns `(-inf, inf)` when `v` vanishes and `p0` lies in `K`, and
    /// `None` for tangential contact.
    #[inline]
    pub fn line_interval(&self, p0: &Vec2, v: &Vec2) -> Option<(f64, f64)> {
        const TANGENCY: f64 = 1e-12;
        let vv = v.norm_squared();
        if vv < 1e-24 {
            return if self.contains(p0, 0.0) {
                Some((f64::NEG_INFINITY, f64::INFINITY))
            } else {
                None
            };
        }
        match self {
            Self::Segment { half_length } => {
                let a = *half_length;
                if v.x.abs() < 1e-12 {
                    return if p0.x.abs() <= a {
                        Some((f64::NEG_INFINITY, f64::INFINITY))
                    } else {
                        None
                    };
                }
                let t1 = (-a - p0.x) / v.x;
                let t2 = (a - p0.x) / v.x;
                Some((t1.min(t2), t1.max(t2)))
            }
            Self::Disc { radius } => {
                let b = p0.dot(v);
                let c = p0.norm_squared() - radius * radius;
                // Squared half-chord in L^⊥ units.
                let h2 = (b * b - vv * c) / vv;
                if h2 <= TANGENCY {
                    return None;
                }
                let s = (b * b - vv * c).sqrt();
                Some(((-b - s) / vv, (-b + s) / vv))
            }
            Self::Polygon(poly) => poly.line_interval(p0, v),
        }
    }
}

/// `nu(K ∩ (K - t))`.
pub fn covariogram(k: &CrossSection, t: &Vec2) -> f64 {
    match k {
        CrossSection::Segment { half_length } => (2.0 * half_length - t.x.abs()).max(0.0),
        CrossSection::Disc { radius } => disc_covariogram(*radius, t.norm()),
        CrossSection::Polygon(p) => {
            let shifted: Vec<Vec2> = p.vertices.iter().map(|v| v - t).collect();
            polygon_area(&clip_convex(&p.vertices, &shifted))
        }
    }
}

fn disc_covariogram(a: f64, r: f64) -> f64 {
    if r >= 2.0 * a {
        return 0.0;
    }
    let x = (r / (2.0 * a)).clamp(-1.0, 1.0);
    2.0 * a * a * x.acos() - 0.5 * r * (4.0 * a * a - r * r).max(0.0).sqrt()
}

/// One-sided derivative of the covariogram at the origin in direction `u`.
pub fn covariogram_derivative_at_origin(k: &CrossSection, u: &Vec2) -> f64 {
    match k {
        CrossSection::Segment { .. } => -1.0,
        CrossSection::Disc { radius } => -2.0 * radius,
        CrossSection::Polygon(p) => {
            let n = u.norm();
            let w = Vec2::new(-u.y, u.x) / n;
            -p.width(&w)
        }
    }
}

impl ConvexPolygon {
    /// Validates convexity, orients counterclockwise and recentres the
    /// vertices at the centre of the smallest enclosing circle.
    pub fn new(mut vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::geometry("polygon needs at least 3 vertices"));
        }
        if vertices.iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(Error::geometry("polygon vertices must be finite"));
        }
        let signed = signed_area(&vertices);
        if signed.abs() <= NORM_TOL {
            return Err(Error::geometry("polygon has zero area"));
        }
        if signed < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if cross(&(b - a), &(c - b)) <= GEOM_TOL {
                return Err(Error::geometry(format!(
                    "polygon is not strictly convex at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        let (center, _) = min_enclosing_circle(&vertices);
        let vertices: Vec<Vec2> = vertices.into_iter().map(|v| v - center).collect();
        // Taken from the stored vertices so that re-import is bit-exact.
        let circumradius = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(Self {
            vertices,
            circumradius,
        })
    }

    /// Rebuilds a polygon whose vertices are already centred and
    /// counterclockwise, without moving them.
    pub(crate) fn from_centered(vertices: Vec<Vec2>) -> Result<Self> {
        let checked = Self::new(vertices.clone())?;
        let circumradius = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if (circumradius - checked.circumradius).abs() > 1e-9 {
            return Err(Error::geometry("polygon vertices are not centred"));
        }
        Ok(Self {
            vertices,
            circumradius,
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]).norm())
            .sum()
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.vertices {
            for b in &self.vertices {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Length of the projection onto the unit direction `w`.
    pub fn width(&self, w: &Vec2) -> f64 {
        let (lo, hi) = self
            .vertices
            .iter()
            .map(|v| v.dot(w))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)));
        hi - lo
    }

    pub fn contains(&self, p: &Vec2, tol: f64) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let e = self.vertices[(i + 1) % n] - a;
            cross(&e, &(p - a)) >= -tol * e.norm()
        })
    }

    pub fn distance(&self, p: &Vec2) -> f64 {
        if self.contains(p, 0.0) {
            return 0.0;
        }
        let n = self.vertices.len();
        (0..n)
            .map(|i| point_segment_distance(p, &self.vertices[i], &self.vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Cyrus–Beck clipping of the line `p0 + t v` against the polygon.
    fn line_interval(&self, p0: &Vec2, v: &Vec2) -> Option<(f64, f64)> {
        let n = self.vertices.len();
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..n {
            let a = self.vertices[i];
            let e = self.vertices[(i + 1) % n] - a;
            // Outward normal of a counterclockwise edge.
            let normal = Vec2::new(e.y, -e.x);
            let num = normal.dot(&(a - p0));
            let den = normal.dot(v);
            if den.abs() < 1e-15 * normal.norm() {
                if num < 0.0 {
                    return None;
                }
                continue;
            }
            let t = num / den;
            if den < 0.0 {
                lo = lo.max(t);
            } else {
                hi = hi.min(t);
            }
            if lo >= hi {
                return None;
            }
        }
        Some((lo, hi))
    }
}

#[inline]
fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn signed_area(v: &[Vec2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| cross(&v[i], &v[(i + 1) % n])).sum::<f64>()
}

pub(crate) fn polygon_area(v: &[Vec2]) -> f64 {
    if v.len() < 3 {
        return 0.0;
    }
    signed_area(v).abs()
}

fn point_segment_distance(p: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    let e = b - a;
    let t = ((p - a).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
    (p - (a + e * t)).norm()
}

/// Sutherland–Hodgman clipping of `subject` by the convex counterclockwise
/// polygon `clip`.
pub(crate) fn clip_convex(subject: &[Vec2], clip: &[Vec2]) -> Vec<Vec2> {
    let mut out = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let a = clip[i];
        let e = clip[(i + 1) % n] - a;
        let side = |p: &Vec2| cross(&e, &(p - a));
        let input = std::mem::take(&mut out);
        let m = input.len();
        for j in 0..m {
            let cur = input[j];
            let prev = input[(j + m - 1) % m];
            let (sc, sp) = (side(&cur), side(&prev));
            if sc >= 0.0 {
                if sp < 0.0 {
                    out.push(prev + (cur - prev) * (sp / (sp - sc)));
                }
                out.push(cur);
            } else if sp >= 0.0 {
                out.push(prev + (cur - prev) * (sp / (sp - sc)));
            }
        }
    }
    out
}

/// Smallest enclosing circle (Welzl, iterative form).
fn min_enclosing_circle(points: &[Vec2]) -> (Vec2, f64) {
    let inside = |c: &Vec2, r: f64, p: &Vec2| (p - c).norm() <= r * (1.0 + 1e-12) + 1e-15;
    let mut c = points[0];
    let mut r = 0.0;
    for i in 1..points.len() {
        if inside(&c, r, &points[i]) {
            continue;
        }
        c = points[i];
        r = 0.0;
        for j in 0..i {
            if inside(&c, r, &points[j]) {
                continue;
            }
            c = (points[i] + points[j]) * 0.5;
            r = (points[i] - c).norm();
            for k in 0..j {
                if inside(&c, r, &points[k]) {
                    continue;
                }
                let (cc, rr) = circumcircle(&points[i], &points[j], &points[k]);
                c = cc;
                r = rr;
            }
        }
    }
    (c, r)
}

fn circumcircle(a: &Vec2, b: &Vec2, c: &Vec2) -> (Vec2, f64) {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    let (a2, b2, c2) = (a.norm_squared(), b.norm_squared(), c.norm_squared());
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    let center = Vec2::new(ux, uy);
    (center, (a - center).norm())
}

/// Area (length) of `⋃_i (K + p_i)` for finitely many translates of the
/// base `k`.
///
/// Segments use interval merging, discs an exact boundary-arc integral,
/// polygons inclusion–exclusion over convex intersections.
pub fn union_area_of_translates(k: &CrossSection, points: &[Vec2]) -> f64 {
    match k {
        CrossSection::Segment { half_length } => {
            let mut iv: Vec<(f64, f64)> = points
                .iter()
                .map(|p| (p.x - half_length, p.x + half_length))
                .collect();
            iv.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut total = 0.0;
            let mut cur: Option<(f64, f64)> = None;
            for (lo, hi) in iv {
                cur = match cur {
                    Some((cl, ch)) if lo <= ch => Some((cl, ch.max(hi))),
                    Some((cl, ch)) => {
                        total += ch - cl;
                        Some((lo, hi))
                    }
                    None => Some((lo, hi)),
                };
            }
            if let Some((cl, ch)) = cur {
                total += ch - cl;
            }
            total
        }
        CrossSection::Disc { radius } => union_of_equal_discs(*radius, points),
        CrossSection::Polygon(p) => {
            let mut pts: Vec<Vec2> = Vec::new();
            for q in points {
                if !pts.iter().any(|r| (r - q).norm() <= 1e-12) {
                    pts.push(*q);
                }
            }
            let translates: Vec<Vec<Vec2>> = pts
                .iter()
                .map(|q| p.vertices.iter().map(|v| v + q).collect())
                .collect();
            let mut total = 0.0;
            inclusion_exclusion(&translates, 0, None, 0, &mut total);
            total
        }
    }
}

fn inclusion_exclusion(
    polys: &[Vec<Vec2>],
    start: usize,
    current: Option<&[Vec2]>,
    depth: usize,
    total: &mut f64,
) {
    for i in start..polys.len() {
        let next = match current {
            None => polys[i].clone(),
            Some(c) => clip_convex(c, &polys[i]),
        };
        let area = polygon_area(&next);
        if area <= 0.0 {
            continue;
        }
        let sign = if depth % 2 == 0 { 1.0 } else { -1.0 };
        *total += sign * area;
        inclusion_exclusion(polys, i + 1, Some(&next), depth + 1, total);
    }
}

/// Area of a union of discs of common radius via Green's theorem on the
/// uncovered boundary arcs.
fn union_of_equal_discs(r: f64, points: &[Vec2]) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let mut centers: Vec<Vec2> = Vec::new();
    for q in points {
        if !centers.iter().any(|c| (c - q).norm() <= 1e-12 * r.max(1.0)) {
            centers.push(*q);
        }
    }
    let two_pi = 2.0 * PI;
    let mut total = 0.0;
    for (i, c) in centers.iter().enumerate() {
        let mut covered: Vec<(f64, f64)> = Vec::new();
        for (j, o) in centers.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = (o - c).norm();
            if d >= 2.0 * r {
                continue;
            }
            let mid = (o.y - c.y).atan2(o.x - c.x);
            let half = (d / (2.0 * r)).acos();
            let lo = (mid - half).rem_euclid(two_pi);
            let hi = lo + 2.0 * half;
            if hi > two_pi {
                covered.push((lo, two_pi));
                covered.push((0.0, hi - two_pi));
            } else {
                covered.push((lo, hi));
            }
        }
        covered.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut free = Vec::new();
        let mut cursor = 0.0;
        for (lo, hi) in covered {
            if lo > cursor {
                free.push((cursor, lo));
            }
            cursor = f64::max(cursor, hi);
        }
        if cursor < two_pi {
            free.push((cursor, two_pi));
        }
        for (t1, t2) in free {
            total += 0.5
                * (r * r * (t2 - t1) + r * c.x * (t2.sin() - t1.sin())
                    - r * c.y * (t2.cos() - t1.cos()));
        }
    }
    total
}
