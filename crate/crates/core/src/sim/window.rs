use crate::error::{Error, Result};
use crate::euclid::Vec3;
use rand::Rng;

/// Axis-aligned observation window `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    dim: usize,
    lo: Vec3,
    hi: Vec3,
}

impl Window {
    pub fn new(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let dim = lo.len();
        if dim != hi.len() || !(dim == 2 || dim == 3) {
            return Err(Error::arg(format!(
                "window corners need 2 or 3 matching coordinates, got {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        let (mut l, mut h) = (Vec3::zeros(), Vec3::zeros());
        for i in 0..dim {
            if !(lo[i].is_finite() && hi[i].is_finite() && hi[i] > lo[i]) {
                return Err(Error::arg(format!(
                    "window side {i} is empty: [{}, {}]",
                    lo[i], hi[i]
                )));
            }
            l[i] = lo[i];
            h[i] = hi[i];
        }
        Ok(Self { dim, lo: l, hi: h })
    }

    /// `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(&vec![lo; dim], &vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self) -> Vec3 {
        self.lo
    }

    pub fn hi(&self) -> Vec3 {
        self.hi
    }

    pub fn center(&self) -> Vec3 {
        (self.lo + self.hi) * 0.5
    }

    pub fn side(&self, i: usize) -> f64 {
        self.hi[i] - self.lo[i]
    }

    pub fn min_side(&self) -> f64 {
        (0..self.dim).map(|i| self.side(i)).fold(f64::INFINITY, f64::min)
    }

    pub fn circumradius(&self) -> f64 {
        (self.hi - self.lo).norm() * 0.5
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim).map(|i| self.side(i)).product()
    }

    /// Membership with a relative slack of `1e-9` of the window size.
    pub fn contains(&self, x: &Vec3) -> bool {
        let tol = 1e-9 * (1.0 + self.circumradius());
        (0..self.dim).all(|i| x[i] >= self.lo[i] - tol && x[i] <= self.hi[i] + tol)
            && (self.dim == 3 || x.z == 0.0)
    }

    /// The window shrunk by `margin[i]` on both sides of axis `i`.
    pub fn eroded_by(&self, margin: &Vec3) -> Result<Self> {
        let mut lo = self.lo;
        let mut hi = self.hi;
        for i in 0..self.dim {
            let m = margin[i].abs();
            lo[i] += m;
            hi[i] -= m;
            if !(hi[i] > lo[i]) {
                return Err(Error::arg(format!(
                    "erosion by {m} empties window side {i} of length {}",
                    self.side(i)
                )));
            }
        }
        Ok(Self { dim: self.dim, lo, hi })
    }

    pub fn eroded(&self, margin: f64) -> Result<Self> {
        self.eroded_by(&Vec3::repeat(margin))
    }

    pub fn corners(&self) -> Vec<Vec3> {
        let n = 1 << self.dim;
        (0..n)
            .map(|mask| {
                let mut c = self.lo;
                for i in 0..self.dim {
                    if mask & (1 << i) != 0 {
                        c[i] = self.hi[i];
                    }
                }
                c
            })
            .collect()
    }

    /// Uniform point in the window.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec3 {
        let mut x = Vec3::zeros();
        for i in 0..self.dim {
            x[i] = self.lo[i] + self.side(i) * rng.random::<f64>();
        }
        x
    }

    /// Maps a point of the unit cube affinely onto the window.
    pub fn from_unit(&self, u: &Vec3) -> Vec3 {
        let mut x = Vec3::zeros();
        for i in 0..self.dim {
            x[i] = self.lo[i] + self.side(i) * u[i];
        }
        x
    }

    /// Parameter range `[t0, t1]` of the line `p + t v` inside the window.
    pub fn clip_line(&self, p: &Vec3, v: &Vec3) -> Option<(f64, f64)> {
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..self.dim {
            if v[i].abs() < 1e-15 {
                if p[i] < self.lo[i] || p[i] > self.hi[i] {
                    return None;
                }
                continue;
            }
            let a = (self.lo[i] - p[i]) / v[i];
            let b = (self.hi[i] - p[i]) / v[i];
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
        (t1 > t0).then_some((t0, t1))
    }
}
