use super::{PlacedCylinder, Window};
use crate::euclid::Vec3;

/// Uniform cell index over the window listing, per cell, the cylinders that
/// may meet it.
#[derive(Clone, Debug)]
pub(super) struct Grid {
    dim: usize,
    lo: Vec3,
    inv_cell: Vec3,
    n: [usize; 3],
    cells: Vec<Vec<u32>>,
}

impl Grid {
    pub(super) fn build(window: &Window, cylinders: &[PlacedCylinder], r_max: f64) -> Self {
        let dim = window.dim();
        let cap = if dim == 2 { 64 } else { 24 };
        let mut n = [1usize; 3];
        let mut cell = Vec3::repeat(1.0);
        for i in 0..dim {
            let side = window.side(i);
            let target = (2.0 * r_max).max(side / cap as f64);
            n[i] = ((side / target).ceil() as usize).clamp(1, cap);
            cell[i] = side / n[i] as f64;
        }
        let half_diag = 0.5 * cell.rows(0, dim).norm() * (1.0 + 1e-9);
        // Covers the membership tolerance and points on the window boundary.
        let slack = 1e-7 * (1.0 + window.circumradius());
        let total = n[0] * n[1] * n[2];
        let mut cells = vec![Vec::new(); total];
        let lo = window.lo();
        for (ci, c) in cylinders.iter().enumerate() {
            for iz in 0..n[2] {
                for iy in 0..n[1] {
                    for ix in 0..n[0] {
                        let mut center = lo;
                        center.x += (ix as f64 + 0.5) * cell.x;
                        center.y += (iy as f64 + 0.5) * cell.y;
                        if dim == 3 {
                            center.z += (iz as f64 + 0.5) * cell.z;
                        }
                        if c.distance(&center) <= half_diag + slack {
                            cells[(iz * n[1] + iy) * n[0] + ix].push(ci as u32);
                        }
                    }
                }
            }
        }
        Self {
            dim,
            lo,
            inv_cell: cell.map(|c| 1.0 / c),
            n,
            cells,
        }
    }

    #[inline]
    pub(super) fn candidates(&self, x: &Vec3) -> &[u32] {
        let mut idx = [0usize; 3];
        for i in 0..self.dim {
            let f = ((x[i] - self.lo[i]) * self.inv_cell[i]).floor();
            idx[i] = (f.max(0.0) as usize).min(self.n[i] - 1);
        }
        &self.cells[(idx[2] * self.n[1] + idx[1]) * self.n[0] + idx[0]]
    }
}
