//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the library is generic over (`f32` or `f64`).
///
/// Tolerances that the routines quote in absolute terms (for example the
/// `1e-12` root residual bound) are calibrated for `f64`; for narrower types
/// they are widened to a fixed multiple of machine epsilon.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + serde::Serialize
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal must be representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count must be representable")
    }

    /// `max(tol, factor * epsilon)`: an absolute `f64` tolerance widened for
    /// scalar types that cannot resolve it.
    #[inline]
    fn tol(tol: f64, eps_factor: f64) -> Self {
        let t = Self::lit(tol);
        let floor = Self::epsilon() * Self::lit(eps_factor);
        if t > floor {
            t
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{iθ}`.
#[inline]
pub fn unit<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// `−log|z|`, computed through `log1p` close to the unit circle.
#[inline]
pub fn neg_log_modulus<T: Real>(z: Complex<T>) -> T {
    let r = z.norm();
    if r > T::lit(0.9) {
        -(r - T::one()).ln_1p()
    } else {
        -r.ln()
    }
}

/// Principal argument mapped to `[0, 2π)`.
#[inline]
pub fn arg_positive<T: Real>(z: Complex<T>) -> T {
    let a = z.arg();
    if a < T::zero() {
        a + T::TAU()
    } else {
        a
    }
}

/// Lossless-enough conversion used at serialization boundaries.
#[inline]
pub fn c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}

#[inline]
pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

/// Neumaier-compensated sum, for long sums of like-signed small terms.
pub fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(terms: I) -> T {
    let mut sum = T::zero();
    let mut carry = T::zero();
    for x in terms {
        let t = sum + x;
        carry = carry
            + if sum.abs() >= x.abs() {
                (sum - t) + x
            } else {
                (x - t) + sum
            };
        sum = t;
    }
    sum + carry
}
