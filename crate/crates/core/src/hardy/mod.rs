//! Hardy space machinery: test functions, reproducing kernels, outer
//! functions and three independent ways of computing `‖f‖ᵖ_{H^p}`.

mod function;
mod norms;
mod outer;

pub use function::{kernel, kernel_with, KernelRegime, KernelSpec, TestFunction, TestFunctionKind};
pub use norms::{
    circle_means, norm_boundary, norm_hardy_stein, norm_hardy_stein_with, norm_layer_cake, LayerCakeGrid, RadiusGrid,
};
pub use outer::{outer_function, BoundaryModulus, ModulusArc, OuterFunction};

use thiserror::Error;

use crate::numerics::NumericsError;
use crate::symbols::SymbolError;
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HardyError {
    #[error("Hardy exponent must be positive and finite, got {0}")]
    InvalidExponent(f64),
    #[error("`{tag}` is not zero-free, which the Hardy-Stein integrand needs for p = {p} < 2")]
    NotZeroFree { tag: String, p: f64 },
    #[error("kernel point must lie in the open disk (|λ| = {0})")]
    KernelOutsideDisk(f64),
    #[error("invalid boundary modulus: {0}")]
    InvalidModulus(String),
    #[error("invalid radius grid: {0}")]
    InvalidRadii(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// The exponent `p > 0` of `H^p`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize)]
pub struct HardyExponent<T>(T);

impl<T: Real> HardyExponent<T> {
    pub fn new(p: T) -> Result<Self, HardyError> {
        if p > T::zero() && p.is_finite() {
            Ok(Self(p))
        } else {
            Err(HardyError::InvalidExponent(p.as_f64()))
        }
    }

    pub fn get(self) -> T {
        self.0
    }
}
