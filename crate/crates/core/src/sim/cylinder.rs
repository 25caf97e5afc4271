use crate::euclid::{CrossSection, Subspace, Vec2, Vec3, GEOM_TOL};

/// A cylinder `{y : Pr_{L^⊥}(y) ∈ K + offset}`, with `K` and `offset` in
/// the canonical frame of `L^⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedCylinder {
    pub subspace: Subspace,
    pub section: CrossSection,
    pub offset: Vec2,
}

impl PlacedCylinder {
    pub fn new(subspace: Subspace, section: CrossSection, offset: Vec2) -> Self {
        Self {
            subspace,
            section,
            offset,
        }
    }

    #[inline]
    fn local(&self, x: &Vec3) -> Vec2 {
        self.subspace.project_along(x) - self.offset
    }

    #[inline]
    pub fn contains(&self, x: &Vec3) -> bool {
        self.section.contains(&self.local(x), GEOM_TOL)
    }

    /// Euclidean distance from `x` (the cylinder is invariant along `L`).
    #[inline]
    pub fn distance(&self, x: &Vec3) -> f64 {
        self.section.distance(&self.local(x))
    }

    /// Parameter interval of the line `p + t v` inside the cylinder, or
    /// `(-inf, inf)` when the line runs inside parallel to `L`.
    #[inline]
    pub fn line_interval(&self, p: &Vec3, v: &Vec3) -> Option<(f64, f64)> {
        let w = self.subspace.project_along(v);
        self.section.line_interval(&self.local(p), &w)
    }
}
