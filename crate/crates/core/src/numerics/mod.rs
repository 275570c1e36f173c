//! Shared computational substrate: quadrature on the disk and circle,
//! adaptive integration, seeded sampling and polynomial root extraction.

mod adaptive;
mod montecarlo;
mod quadrature;
mod roots;
mod sampler;

pub use adaptive::{integrate_adaptive, integrate_circle_adaptive, AdaptiveOptions, AdaptiveResult};
pub use montecarlo::{mc_region_fraction, Region};
pub use quadrature::{gauss_legendre_unit, integrate_circle, integrate_disk, CircleQuadrature, DiskQuadrature};
pub use roots::{poly_roots, poly_roots_with, PolyCoeffs, Root, RootOptions};
pub use sampler::SeededSampler;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("integrand is not finite at node {index} ({re}, {im})")]
    NonFiniteNode { index: usize, re: f64, im: f64 },
    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(
        "root polishing did not converge for degree {degree} after {iterations} iterations; residuals {residuals:?}"
    )]
    RootNonConvergence {
        degree: usize,
        iterations: usize,
        residuals: Vec<f64>,
    },
    #[error("adaptive quadrature exhausted {panels} panels with error estimate {error:e}")]
    AdaptiveBudget { panels: usize, error: f64 },
}
