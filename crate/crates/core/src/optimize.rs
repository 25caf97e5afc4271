//! Volume-fraction maximisation of spatial fiber systems under a pore-radius
//! variance budget.
//!
//! The budget is enforced through the sufficient condition
//! `E[S] <= 2 pi sqrt(eps - 1/(pi lambda))` on the mean base perimeter. By
//! the isoperimetric inequality discs are optimal among bases of given
//! perimeter, so the problem becomes: maximise `E[R^2]` subject to
//! `E[R] <= c` and `R ∈ [0, R_max]`. Since `R^2 <= R_max R` with equality
//! only on `{0, R_max}`, the two-point law with `P(R = R_max) = c / R_max`
//! is optimal.

use crate::analytic::{pore_moments, variance_bound_cs};
use crate::error::{Error, Result};
use crate::euclid::CrossSection;
use crate::model::{BaseDistribution, DirectionalDistribution, ProcessSpec, RadiusLaw};
use crate::rng::stream;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde_json::json;
use std::f64::consts::PI;

/// Intensity, variance budget and radius cap of a design problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DesignProblem {
    lambda: f64,
    eps: f64,
    r_max: f64,
}

impl DesignProblem {
    pub fn new(lambda: f64, eps: f64, r_max: f64) -> Result<Self> {
        for (name, v) in [("lambda", lambda), ("eps", eps), ("r_max", r_max)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::arg(format!("{name} must be positive, got {v}")));
            }
        }
        variance_bound_cs(lambda, eps)?;
        Ok(Self { lambda, eps, r_max })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Largest admissible mean radius: `min(sqrt(eps - 1/(pi lambda)), R_max)`.
    pub fn mean_radius_bound(&self) -> f64 {
        let cs = variance_bound_cs(self.lambda, self.eps).expect("validated budget");
        (cs / (2.0 * PI)).min(self.r_max)
    }

    /// Whether a radius law satisfies the mean and support constraints.
    pub fn is_feasible(&self, law: &RadiusLaw) -> bool {
        law.mean() <= self.mean_radius_bound() * (1.0 + 1e-12) + 1e-15
            && law.atoms().iter().all(|(r, _)| *r >= 0.0 && *r <= self.r_max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DesignSolution {
    pub radius_law: RadiusLaw,
    /// Mean-radius bound `c`.
    pub c: f64,
    /// Mass at `R_max`.
    pub q: f64,
    pub achieved_mean_area: f64,
    pub achieved_p: f64,
    /// Exact pore-radius variance of the solution.
    pub var_h: f64,
    pub achieved_var_bound_satisfied: bool,
}

impl DesignSolution {
    /// Spatial process of circular fibers with this radius law.
    pub fn process(&self, lambda: f64, alpha: DirectionalDistribution) -> Result<ProcessSpec> {
        ProcessSpec::new(3, 1, lambda, alpha, BaseDistribution::DiscRadiusLaw(self.radius_law.clone()))
    }

    pub fn to_json(&self, prob: &DesignProblem) -> serde_json::Value {
        let law: Vec<[f64; 2]> = self.radius_law.atoms().iter().map(|&(r, q)| [r, q]).collect();
        json!({
            "radius_law": law,
            "c": self.c,
            "q": self.q,
            "achieved_mean_area": self.achieved_mean_area,
            "achieved_p": self.achieved_p,
            "var_H": self.var_h,
            "var_bound_satisfied": self.achieved_var_bound_satisfied,
            "budget_eps": prob.eps,
        })
    }
}

/// The disc with the perimeter of `k` and its area gain over `k`.
pub fn isoperimetric_improvement(k: &CrossSection) -> Result<(CrossSection, f64)> {
    match k {
        CrossSection::Segment { .. } => Err(Error::arg(
            "isoperimetric improvement needs a planar base (disc or polygon)",
        )),
        CrossSection::Disc { .. } => Ok((k.clone(), 0.0)),
        CrossSection::Polygon(p) => {
            let r = p.perimeter() / (2.0 * PI);
            let gain = (PI * r * r - p.area()).max(0.0);
            Ok((CrossSection::disc(r)?, gain))
        }
    }
}

/// Optimal radius law: mass `q = c / R_max` at `R_max`, the rest at 0.
pub fn solve_radius_law(prob: &DesignProblem) -> Result<DesignSolution> {
    let c = prob.mean_radius_bound();
    if c <= 0.0 {
        return Err(Error::InvalidProcess(format!(
            "budget forces empty process: eps = {} equals 1/(pi*lambda), so the mean radius must be 0",
            prob.eps
        )));
    }
    let q = c / prob.r_max;
    let atoms = if q >= 1.0 {
        vec![(prob.r_max, 1.0)]
    } else {
        vec![(0.0, 1.0 - q), (prob.r_max, q)]
    };
    let radius_law = RadiusLaw::new(atoms)?;
    let second = prob.r_max * c;
    let achieved_mean_area = PI * second;
    let achieved_p = -(-prob.lambda * achieved_mean_area).exp_m1();
    let var_h = pore_moments(prob.lambda, 2.0 * PI * radius_law.mean())?.variance;
    Ok(DesignSolution {
        radius_law,
        c,
        q: q.min(1.0),
        achieved_mean_area,
        achieved_p,
        var_h,
        achieved_var_bound_satisfied: var_h <= prob.eps,
    })
}

/// Grid of candidate radii used by [`verify_solution`].
const VERIFY_GRID: usize = 101;

/// Random feasible law `n` (Dirichlet weights on a radius grid, mixed with
/// a point mass at 0 when the mean is too large).
pub fn random_feasible_law(prob: &DesignProblem, seed: u64, n: u64) -> RadiusLaw {
    let mut rng = stream(seed, n);
    let c = prob.mean_radius_bound();
    let radii: Vec<f64> = (0..VERIFY_GRID)
        .map(|i| prob.r_max * i as f64 / (VERIFY_GRID - 1) as f64)
        .collect();
    let mut w: Vec<f64> = (0..VERIFY_GRID).map(|_| Exp1.sample(&mut rng)).collect();
    // Sparse laws reach the boundary of the feasible set more often.
    if rng.random::<f64>() < 0.5 {
        let keep = rng.random_range(1..=3);
        let mut mask = vec![false; VERIFY_GRID];
        for _ in 0..keep {
            mask[rng.random_range(0..VERIFY_GRID)] = true;
        }
        w.iter_mut().zip(&mask).for_each(|(x, m)| if !m { *x = 0.0 });
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    let mean: f64 = w.iter().zip(&radii).map(|(a, r)| a * r).sum();
    if mean > c {
        let s = c / mean;
        w.iter_mut().for_each(|x| *x *= s);
        w[0] += 1.0 - s;
    }
    let atoms = radii.into_iter().zip(w).filter(|(_, q)| *q > 0.0).collect();
    RadiusLaw::new(atoms).expect("positive weights on distinct radii")
}

/// Numerical certificate: no random feasible law beats the solution's
/// `E[R^2]` by more than `1e-9`, the solution is feasible, and its exact
/// pore variance respects the budget.
pub fn verify_solution(prob: &DesignProblem, sol: &DesignSolution, n_random: usize, seed: u64) -> bool {
    if !prob.is_feasible(&sol.radius_law) {
        return false;
    }
    let best = sol.radius_law.second_moment();
    let var_ok = pore_moments(prob.lambda, 2.0 * PI * sol.radius_law.mean())
        .map(|m| m.variance <= prob.eps)
        .unwrap_or(false);
    var_ok
        && (0..n_random as u64).all(|i| {
            let law = random_feasible_law(prob, seed, i);
            prob.is_feasible(&law) && law.second_moment() <= best + 1e-9
        })
}
