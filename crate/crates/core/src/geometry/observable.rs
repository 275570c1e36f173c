use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use super::GeometryError;
use crate::numerics::SeededSampler;
use crate::Real;

type Field<T> = Arc<dyn Fn(Complex<T>) -> T + Send + Sync>;

/// A real `C²` function `g` together with its Laplacian `Δg = 4 ∂∂̄g`.
#[derive(Clone)]
pub struct TestObservable<T> {
    g: Field<T>,
    laplacian: Field<T>,
    description: String,
}

impl<T: Real> fmt::Debug for TestObservable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TestObservable({})", self.description)
    }
}

impl<T: Real> TestObservable<T> {
    fn closed_form(
        description: &str,
        g: impl Fn(Complex<T>) -> T + Send + Sync + 'static,
        laplacian: impl Fn(Complex<T>) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            g: Arc::new(g),
            laplacian: Arc::new(laplacian),
            description: description.to_owned(),
        }
    }

    pub fn constant_one() -> Self {
        Self::closed_form("1", |_| T::one(), |_| T::zero())
    }

    pub fn abs_sq() -> Self {
        Self::closed_form("|z|^2", |z| z.norm_sqr(), |_| T::lit(4.0))
    }

    pub fn abs_pow4() -> Self {
        Self::closed_form(
            "|z|^4",
            |z| z.norm_sqr() * z.norm_sqr(),
            |z| T::lit(16.0) * z.norm_sqr(),
        )
    }

    /// `|z|^{2k}`, with `Δ|z|^{2k} = 4k²|z|^{2k−2}`.
    pub fn abs_pow_even(k: u32) -> Self {
        let kk = T::lit(f64::from(k));
        Self::closed_form(
            &format!("|z|^{}", 2 * k),
            move |z| z.norm_sqr().powi(k as i32),
            move |z| {
                if k == 0 {
                    T::zero()
                } else {
                    T::lit(4.0) * kk * kk * z.norm_sqr().powi(k as i32 - 1)
                }
            },
        )
    }

    pub fn re() -> Self {
        Self::closed_form("Re z", |z| z.re, |_| T::zero())
    }

    /// A user-supplied pair, accepted only if the claimed Laplacian matches a
    /// 5-point stencil of `g` within `1e−5` (relative to `max(1, |Δg|)`) at 16
    /// seeded interior points.
    pub fn custom(
        description: impl Into<String>,
        g: impl Fn(Complex<T>) -> T + Send + Sync + 'static,
        laplacian: impl Fn(Complex<T>) -> T + Send + Sync + 'static,
    ) -> Result<Self, GeometryError> {
        let obs = Self {
            g: Arc::new(g),
            laplacian: Arc::new(laplacian),
            description: description.into(),
        };
        obs.validate()?;
        Ok(obs)
    }

    fn validate(&self) -> Result<(), GeometryError> {
        let mut s = SeededSampler::new(0x5EED);
        let h = T::lit(1e-3);
        for _ in 0..16 {
            let z = Complex::from_polar(T::lit(0.9) * s.uniform::<T>().sqrt(), T::TAU() * s.uniform::<T>());
            let dx = Complex::new(h, T::zero());
            let dy = Complex::new(T::zero(), h);
            let stencil = (self.eval(z + dx) + self.eval(z - dx) + self.eval(z + dy) + self.eval(z - dy)
                - self.eval(z) * T::lit(4.0))
                / (h * h);
            let claimed = self.laplacian(z);
            if !((stencil - claimed).abs() <= T::lit(1e-5) * claimed.abs().max(T::one())) {
                return Err(GeometryError::InvalidObservable {
                    description: self.description.clone(),
                    re: z.re.as_f64(),
                    im: z.im.as_f64(),
                    stencil: stencil.as_f64(),
                    claimed: claimed.as_f64(),
                });
            }
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex<T>) -> T {
        (self.g)(z)
    }

    pub fn laplacian(&self, z: Complex<T>) -> T {
        (self.laplacian)(z)
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}
