//! Stationary anisotropic Poisson cylinder processes in dimensions 2 and 3.
//!
//! A cylinder is the Minkowski sum of a `k`-dimensional linear subspace (its
//! direction space) and a convex base set living in the orthogonal
//! complement. The crate provides:
//!
//! - [`euclid`]: subspaces, projections, cross sections and their covariograms.
//! - [`model`]: process descriptions (intensity, directional and base laws).
//! - [`analytic`]: closed-form characteristics of the union set (volume
//!   fraction, covariance, contact distributions, specific surface area,
//!   pore-radius moments).
//! - [`sim`]: exact window-restricted sampling with geometric queries.
//! - [`estimate`]: Monte Carlo estimators reporting standard errors and
//!   z-scores against the closed forms.
//! - [`optimize`]: volume-fraction maximisation under a pore-variance budget.
//! - [`cli`]: the batch front end used by the `cylproc` binary.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod estimate;
pub mod euclid;
pub mod model;
pub mod optimize;
pub mod quadrature;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
