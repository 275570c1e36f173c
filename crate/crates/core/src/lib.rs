//! Numerical tests for closed range of composition operators on Hardy spaces.
//!
//! Every routine is generic over the scalar type through [`Real`]; the
//! aliases below fix it to `f64`, the precision the default tolerances are
//! calibrated for.

pub mod criteria;
pub mod geometry;
pub mod hardy;
pub mod nevanlinna;
pub mod numerics;
pub mod scalar;
pub mod symbols;

pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Symbol64 = symbols::Symbol<f64>;
pub type SymbolSpec64 = symbols::SymbolSpec<f64>;
pub type NamedSymbol64 = symbols::NamedSymbol<f64>;
pub type TestFunction64 = hardy::TestFunction<f64>;
pub type HardyExponent64 = hardy::HardyExponent<f64>;
pub type RadiusGrid64 = hardy::RadiusGrid<f64>;
pub type DiskQuadrature64 = numerics::DiskQuadrature<f64>;
pub type CircleQuadrature64 = numerics::CircleQuadrature<f64>;
pub type EmpiricalBoundaryMeasure64 = geometry::EmpiricalBoundaryMeasure<f64>;
pub type CarlesonWindow64 = geometry::CarlesonWindow<f64>;
pub type PseudoDisk64 = geometry::PseudoDisk<f64>;
pub type TestObservable64 = geometry::TestObservable<f64>;

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] numerics::NumericsError),
    #[error(transparent)]
    Symbol(#[from] symbols::SymbolError),
    #[error(transparent)]
    Parse(#[from] symbols::ParseError),
    #[error(transparent)]
    Hardy(#[from] hardy::HardyError),
    #[error(transparent)]
    Nevanlinna(#[from] nevanlinna::NevanlinnaError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Criteria(#[from] criteria::CriteriaError),
}
