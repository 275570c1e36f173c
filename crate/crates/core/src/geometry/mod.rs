//! Pseudo-hyperbolic geometry, Carleson windows, empirical pullback
//! measures and the verifiers built on them.

mod measure;
mod observable;
mod verify;

pub use measure::{pullback_measure, rn_density, Atom, DensityEstimate, EmpiricalBoundaryMeasure};
pub use observable::TestObservable;
pub use verify::{verify_pb1, verify_pb2, verify_pb2_with, Pb1Report, Pb2Report, ProbeGrid};

use num_complex::Complex;
use thiserror::Error;

use crate::nevanlinna::NevanlinnaError;
use crate::numerics::{NumericsError, Region, SeededSampler};
use crate::symbols::SymbolError;
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid pseudo-hyperbolic disk: {0}")]
    InvalidPseudoDisk(String),
    #[error("invalid Carleson window: {0}")]
    InvalidWindow(String),
    #[error("Laplacian of `{description}` disagrees with the 5-point stencil at ({re}, {im}): {stencil} vs {claimed}")]
    InvalidObservable {
        description: String,
        re: f64,
        im: f64,
        stencil: f64,
        claimed: f64,
    },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid density estimate request: {0}")]
    InvalidBins(String),
    #[error(transparent)]
    Nevanlinna(#[from] NevanlinnaError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `ρ(z, w) = |z − w| / |1 − z̄w|`.
pub fn pseudo_distance<T: Real>(z: Complex<T>, w: Complex<T>) -> T {
    (z - w).norm() / (Complex::new(T::one(), T::zero()) - z.conj() * w).norm()
}

/// `D_η(a) = {z : ρ(a, z) < η}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoDisk<T> {
    a: Complex<T>,
    eta: T,
}

impl<T: Real> PseudoDisk<T> {
    pub fn new(a: Complex<T>, eta: T) -> Result<Self, GeometryError> {
        if !(a.norm() < T::one()) {
            return Err(GeometryError::InvalidPseudoDisk(format!("|a| = {} ≥ 1", a.norm())));
        }
        if !(eta > T::zero() && eta < T::one()) {
            return Err(GeometryError::InvalidPseudoDisk(format!("η = {eta} outside (0, 1)")));
        }
        Ok(Self { a, eta })
    }

    pub fn center(&self) -> Complex<T> {
        self.a
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    fn denom(&self) -> T {
        T::one() - self.eta * self.eta * self.a.norm_sqr()
    }

    /// Center of the Euclidean disk that `D_η(a)` is.
    pub fn euclidean_center(&self) -> Complex<T> {
        self.a * ((T::one() - self.eta * self.eta) / self.denom())
    }

    pub fn euclidean_radius(&self) -> T {
        self.eta * (T::one() - self.a.norm_sqr()) / self.denom()
    }

    /// Normalized area `A(D_η(a))`.
    pub fn area(&self) -> T {
        let r = self.euclidean_radius();
        r * r
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        pseudo_distance(self.a, z) < self.eta
    }
}

impl<T: Real> Region<T> for PseudoDisk<T> {
    fn sample_uniform(&self, sampler: &mut SeededSampler) -> Complex<T> {
        let r = self.euclidean_radius() * sampler.uniform::<T>().sqrt();
        let t = T::TAU() * sampler.uniform::<T>();
        self.euclidean_center() + Complex::from_polar(r, t)
    }
}

/// `W(ζ, h) = {1 − h < |z| ≤ 1, |arg(z ζ̄)| ≤ πh}`.
///
/// Points with `|z|` up to `1 + 1e−12` count as on the circle, so rounding in
/// boundary values of inner symbols does not drop atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlesonWindow<T> {
    zeta: Complex<T>,
    h: T,
}

impl<T: Real> CarlesonWindow<T> {
    pub fn new(zeta: Complex<T>, h: T) -> Result<Self, GeometryError> {
        if (zeta.norm() - T::one()).abs() > T::tol(1e-12, 8.0) {
            return Err(GeometryError::InvalidWindow(format!("|ζ| = {} is not 1", zeta.norm())));
        }
        if !(h > T::zero() && h < T::one()) {
            return Err(GeometryError::InvalidWindow(format!("h = {h} outside (0, 1)")));
        }
        Ok(Self { zeta, h })
    }

    /// Window centered at `e^{iθ}`.
    pub fn at_angle(theta: T, h: T) -> Result<Self, GeometryError> {
        Self::new(crate::scalar::unit(theta), h)
    }

    pub fn zeta(&self) -> Complex<T> {
        self.zeta
    }

    pub fn h(&self) -> T {
        self.h
    }

    /// Same center, depth `factor · h`.
    pub fn scaled(&self, factor: T) -> Result<Self, GeometryError> {
        Self::new(self.zeta, self.h * factor)
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        let r = z.norm();
        r > T::one() - self.h
            && r <= T::one() + T::tol(1e-12, 8.0)
            && (z * self.zeta.conj()).arg().abs() <= T::PI() * self.h
    }
}

/// [`CarlesonWindow::contains`].
pub fn window_contains<T: Real>(w: &CarlesonWindow<T>, z: Complex<T>) -> bool {
    w.contains(z)
}

/// [`PseudoDisk::area`].
pub fn pseudo_disk_area<T: Real>(d: &PseudoDisk<T>) -> T {
    d.area()
}
