use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use super::norms::{norm_boundary, RadiusGrid};
use super::outer::OuterFunction;
use super::{HardyError, HardyExponent};
use crate::numerics::{poly_roots, CircleQuadrature, PolyCoeffs};
use crate::symbols::SelfMap;
use crate::Real;

/// Closed-form descriptor behind a [`TestFunction`].
#[derive(Clone)]
pub enum TestFunctionKind<T> {
    Polynomial(PolyCoeffs<T>),
    /// `scale · (1 − λ̄z)^{−exponent}` on the principal branch.
    Kernel {
        lambda: Complex<T>,
        scale: T,
        exponent: T,
    },
    Outer(Arc<OuterFunction<T>>),
    /// `f ∘ φ`.
    Composed {
        outer: Box<TestFunction<T>>,
        symbol: Arc<dyn SelfMap<T>>,
    },
}

/// An analytic function on a neighbourhood of the closed disk with a
/// closed-form derivative.
#[derive(Clone)]
pub struct TestFunction<T> {
    kind: TestFunctionKind<T>,
    zero_free: bool,
    tag: String,
}

impl<T: Real> fmt::Debug for TestFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("tag", &self.tag)
            .field("zero_free", &self.zero_free)
            .finish()
    }
}

impl<T: Real> TestFunction<T> {
    /// Zero-freeness is decided from the roots: every root must lie outside
    /// the closed disk.
    pub fn polynomial(coeffs: Vec<Complex<T>>) -> Result<Self, HardyError> {
        let p = PolyCoeffs::new(coeffs)?;
        let zero_free = p.degree() == 0 || poly_roots(&p)?.iter().all(|r| r.value.norm() > T::one());
        let tag = format!(
            "poly[{}]",
            p.coeffs()
                .iter()
                .map(|c| format!("{},{}", c.re, c.im))
                .collect::<Vec<_>>()
                .join(" ")
        );
        Ok(Self {
            kind: TestFunctionKind::Polynomial(p),
            zero_free,
            tag,
        })
    }

    pub fn constant(c: Complex<T>) -> Result<Self, HardyError> {
        Self::polynomial(vec![c])
    }

    /// `zᵏ`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Complex::new(T::zero(), T::zero()); k + 1];
        c[k] = Complex::new(T::one(), T::zero());
        Self::polynomial(c).expect("monomials are valid polynomials")
    }

    /// `scale · (1 − λ̄z)^{−exponent}`; always zero-free.
    pub fn raw_kernel(lambda: Complex<T>, scale: T, exponent: T) -> Result<Self, HardyError> {
        if !(lambda.norm() < T::one()) {
            return Err(HardyError::KernelOutsideDisk(lambda.norm().as_f64()));
        }
        Ok(Self {
            kind: TestFunctionKind::Kernel {
                lambda,
                scale,
                exponent,
            },
            zero_free: scale != T::zero(),
            tag: format!("kernel[{},{}; {scale}; {exponent}]", lambda.re, lambda.im),
        })
    }

    pub fn from_outer(outer: OuterFunction<T>) -> Self {
        let tag = format!("outer[{}]", outer.modulus_tag());
        Self {
            kind: TestFunctionKind::Outer(Arc::new(outer)),
            zero_free: true,
            tag,
        }
    }

    /// `f ∘ φ`, zero-free whenever `f` is.
    pub fn compose(f: &Self, symbol: Arc<dyn SelfMap<T>>) -> Self {
        Self {
            tag: format!("{} ∘ ({})", f.tag, symbol.tag()),
            zero_free: f.zero_free,
            kind: TestFunctionKind::Composed {
                outer: Box::new(f.clone()),
                symbol,
            },
        }
    }

    pub fn kind(&self) -> &TestFunctionKind<T> {
        &self.kind
    }

    pub fn zero_free(&self) -> bool {
        self.zero_free
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        match &self.kind {
            TestFunctionKind::Polynomial(p) => p.eval(z),
            TestFunctionKind::Kernel {
                lambda,
                scale,
                exponent,
            } => kernel_base(*lambda, z).ln().scale(-*exponent).exp().scale(*scale),
            TestFunctionKind::Outer(o) => o.eval(z),
            TestFunctionKind::Composed { outer, symbol } => outer.eval(symbol.eval(z)),
        }
    }

    pub fn eval_deriv(&self, z: Complex<T>) -> Complex<T> {
        self.eval_with_deriv(z).1
    }

    /// `(f(z), f′(z))`.
    pub fn eval_with_deriv(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        match &self.kind {
            TestFunctionKind::Polynomial(p) => p.eval_with_deriv(z),
            TestFunctionKind::Kernel {
                lambda,
                scale,
                exponent,
            } => {
                let w = kernel_base(*lambda, z);
                let f = w.ln().scale(-*exponent).exp().scale(*scale);
                (f, f * lambda.conj() * *exponent / w)
            }
            TestFunctionKind::Outer(o) => o.eval_with_deriv(z),
            TestFunctionKind::Composed { outer, symbol } => {
                let (f, df) = outer.eval_with_deriv(symbol.eval(z));
                (f, df * symbol.eval_deriv(z))
            }
        }
    }

    /// `|f(z)|ᵖ`, with a real-arithmetic shortcut for kernels.
    pub fn abs_pow(&self, z: Complex<T>, p: T) -> T {
        match &self.kind {
            TestFunctionKind::Kernel {
                lambda,
                scale,
                exponent,
            } => scale.abs().powf(p) * kernel_base(*lambda, z).norm_sqr().powf(-*exponent * p / T::lit(2.0)),
            _ => self.eval(z).norm_sqr().powf(p / T::lit(2.0)),
        }
    }

    /// Checks the zero-free claim on a polar sample of the closed disk.
    pub fn zero_free_on_sample(&self, radial: usize, angular: usize) -> bool {
        (0..=radial).all(|i| {
            let r = T::from_usize_lossy(i) / T::from_usize_lossy(radial);
            (0..angular).all(|j| {
                let theta = T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(angular);
                self.eval(Complex::from_polar(r, theta)).norm() > T::zero()
            })
        })
    }
}

#[inline]
fn kernel_base<T: Real>(lambda: Complex<T>, z: Complex<T>) -> Complex<T> {
    Complex::new(T::one(), T::zero()) - lambda.conj() * z
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum KernelRegime {
    /// `p > 1`: `k_λ / ‖k_λ‖_{H^p}` with `k_λ = 1/(1 − λ̄z)`.
    Normalized,
    /// `0 < p ≤ 1`: `(1 − |λ|²)/(1 − λ̄z)^{(p+1)/p}`, not renormalized.
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec<T> {
    pub lambda: Complex<T>,
    pub p: HardyExponent<T>,
    pub regime: KernelRegime,
}

impl<T: Real> KernelSpec<T> {
    /// The regime follows from `p`.
    pub fn new(lambda: Complex<T>, p: HardyExponent<T>) -> Result<Self, HardyError> {
        if !(lambda.norm() < T::one()) {
            return Err(HardyError::KernelOutsideDisk(lambda.norm().as_f64()));
        }
        let regime = if p.get() > T::one() {
            KernelRegime::Normalized
        } else {
            KernelRegime::Explicit
        };
        Ok(Self { lambda, p, regime })
    }
}

/// Builds the kernel for `spec`.
///
/// In the normalized regime `‖k_λ‖ᵖ` comes from [`norm_boundary`] on the
/// unit circle with a rule that resolves the peak of width `1 − |λ|`; circle
/// means of `|k_λ|ᵖ` increase with the radius, so the circle itself carries
/// the supremum.
pub fn kernel<T: Real>(spec: &KernelSpec<T>) -> Result<TestFunction<T>, HardyError> {
    let width = T::one() - spec.lambda.norm();
    let q = CircleQuadrature::resolving(width, 256, 1 << 22);
    kernel_with(spec, &q, &RadiusGrid::boundary())
}

/// [`kernel`] with an explicit quadrature and radius grid.
pub fn kernel_with<T: Real>(
    spec: &KernelSpec<T>,
    q: &CircleQuadrature<T>,
    radii: &RadiusGrid<T>,
) -> Result<TestFunction<T>, HardyError> {
    let p = spec.p.get();
    let lambda = spec.lambda;
    let f = match spec.regime {
        KernelRegime::Normalized => {
            let raw = TestFunction::raw_kernel(lambda, T::one(), T::one())?;
            let norm_p = norm_boundary(&raw, spec.p, q, radii)?;
            TestFunction::raw_kernel(lambda, norm_p.powf(-T::one() / p), T::one())?
        }
        KernelRegime::Explicit => TestFunction::raw_kernel(lambda, T::one() - lambda.norm_sqr(), (p + T::one()) / p)?,
    };
    Ok(f.with_tag(format!("K[{},{}; p={p}]", lambda.re, lambda.im)))
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn hp(p: f64) -> HardyExponent<f64> {
        HardyExponent::new(p).unwrap()
    }

    #[test]
    fn kernel_at_origin_is_one() {
        let k = kernel(&KernelSpec::new(c(0.0, 0.0), hp(2.0)).unwrap()).unwrap();
        for z in [c(0.0, 0.0), c(0.5, -0.5), c(-1.0, 0.0)] {
            assert!((k.eval(z) - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn normalized_kernel_p2() {
        let k = kernel(&KernelSpec::new(c(0.6, 0.0), hp(2.0)).unwrap()).unwrap();
        for z in [c(0.0, 0.0), c(0.3, 0.7), c(-0.9, 0.1)] {
            let expected = c(0.8, 0.0) / (c(1.0, 0.0) - z * 0.6);
            assert!((k.eval(z) - expected).norm() < 1e-10);
        }
    }

    #[test]
    fn explicit_kernel_p1() {
        let spec = KernelSpec::new(c(0.5, 0.0), hp(1.0)).unwrap();
        assert_eq!(spec.regime, KernelRegime::Explicit);
        let k = kernel(&spec).unwrap();
        let z = c(0.2, 0.4);
        let d = c(1.0, 0.0) - z * 0.5;
        assert!((k.eval(z) - c(0.75, 0.0) / (d * d)).norm() < 1e-14);
    }

    #[test]
    fn derivatives_match_differences() {
        let funcs = [
            TestFunction::raw_kernel(c(0.3, -0.5), 0.7, 1.5).unwrap(),
            TestFunction::polynomial(vec![c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.5)]).unwrap(),
            TestFunction::compose(
                &TestFunction::raw_kernel(c(0.2, 0.1), 1.0, 2.0).unwrap(),
                Arc::new(crate::symbols::Symbol::moebius(c(0.5, 0.0)).unwrap()),
            ),
        ];
        let h = 1e-6;
        for f in &funcs {
            for z in [c(0.1, 0.2), c(-0.6, 0.3)] {
                let fd = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
                assert!((fd - f.eval_deriv(z)).norm() < 1e-7, "{}", f.tag());
            }
        }
    }

    #[test]
    fn zero_free_detection() {
        assert!(TestFunction::polynomial(vec![c(2.0, 0.0), c(1.0, 0.0)])
            .unwrap()
            .zero_free());
        assert!(!TestFunction::polynomial(vec![c(0.5, 0.0), c(0.5, 0.0)])
            .unwrap()
            .zero_free());
        assert!(!TestFunction::<f64>::monomial(1).zero_free());
        let k = TestFunction::raw_kernel(c(0.9, 0.0), 1.0, 3.0).unwrap();
        assert!(k.zero_free() && k.zero_free_on_sample(32, 64));
    }

    #[test]
    fn abs_pow_shortcut_matches_generic() {
        let k = TestFunction::raw_kernel(c(0.3, 0.6), 0.4, 1.7).unwrap();
        let z = c(-0.2, 0.9);
        assert!((k.abs_pow(z, 0.7) - k.eval(z).norm().powf(0.7)).abs() < 1e-13);
    }

    #[test]
    fn kernel_outside_disk_rejected() {
        assert!(KernelSpec::new(c(1.0, 0.0), hp(2.0)).is_err());
    }
}
