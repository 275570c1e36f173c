//! Rational analytic self-maps of the unit disk.

mod spec;
mod text;

pub use spec::{Symbol, SymbolSpec};
pub use text::{parse_symbol, parse_symbol_list, NamedSymbol, ParseError};

use num_complex::Complex;
use thiserror::Error;

use crate::numerics::NumericsError;
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("invalid symbol parameters: {0}")]
    InvalidParameters(String),
    #[error("not a self-map of the disk: sup |φ| on the boundary sample is {sup}")]
    NotSelfMap { sup: f64 },
    #[error("target point must lie in the open disk (|w| = {modulus})")]
    TargetOutsideDisk { modulus: f64 },
    #[error("preimage ({re}, {im}) fails the residual check: |φ(z) − w| = {residual:e}")]
    PreimageResidual { re: f64, im: f64, residual: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Solutions of `φ(z) = w` in the open disk.
#[derive(Debug, Clone, PartialEq)]
pub struct PreimageSet<T> {
    pub points: Vec<(Complex<T>, usize)>,
    /// Set when a root was found within `1e-12` of the unit circle; it is
    /// excluded from `points`.
    pub boundary_proximal: bool,
}

impl<T: Real> PreimageSet<T> {
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Evaluator contract for analytic self-maps of the disk.
///
/// [`Symbol`] implements it for rational maps; other symbol classes can plug
/// into the counting-function and measure machinery through this trait.
pub trait SelfMap<T: Real>: Send + Sync {
    fn eval(&self, z: Complex<T>) -> Complex<T>;

    fn eval_deriv(&self, z: Complex<T>) -> Complex<T>;

    /// All solutions of `φ(z) = w` with `|z| < 1`, with multiplicity.
    fn preimages(&self, w: Complex<T>) -> Result<PreimageSet<T>, SymbolError>;

    /// Every solution of `φ(z) = w` for the analytically continued map,
    /// wherever it lies. Used to locate boundary points where `φ` comes close
    /// to a given value; the default knows none.
    fn level_points(&self, _w: Complex<T>) -> Result<Vec<Complex<T>>, SymbolError> {
        Ok(Vec::new())
    }

    fn at_origin(&self) -> Complex<T> {
        self.eval(Complex::new(T::zero(), T::zero()))
    }

    /// Boundary value `φ(e^{iθ})`.
    fn boundary_pushforward_point(&self, theta: T) -> Complex<T> {
        self.eval(crate::scalar::unit(theta))
    }

    /// Short human-readable identifier used in reports.
    fn tag(&self) -> String;
}
