use num_complex::Complex;

use super::function::TestFunction;
use super::{HardyError, HardyExponent};
use crate::numerics::{gauss_legendre_unit, CircleQuadrature, DiskQuadrature};
use crate::scalar::{neg_log_modulus, unit};
use crate::Real;

/// Increasing radii at which circle means are taken.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusGrid<T> {
    radii: Vec<T>,
}

impl<T: Real> RadiusGrid<T> {
    pub fn new(mut radii: Vec<T>) -> Result<Self, HardyError> {
        if radii.is_empty() {
            return Err(HardyError::InvalidRadii("no radii".into()));
        }
        if radii.iter().any(|&r| !(r >= T::zero() && r <= T::one())) {
            return Err(HardyError::InvalidRadii("radii must lie in [0, 1]".into()));
        }
        radii.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
        radii.dedup();
        Ok(Self { radii })
    }

    /// `1 − 2^{−k}` for `k = 1..19`, then `1 − 1e−6`, then the circle itself.
    ///
    /// Circle means of `|f|ᵖ` increase with the radius for analytic `f`, so
    /// the last entry carries the supremum; the final radius 1 matters for
    /// kernels whose peak is narrower than `1e−6` would resolve.
    pub fn standard() -> Self {
        let mut radii: Vec<T> = (1..=19).map(|k| T::one() - T::lit(0.5f64.powi(k))).collect();
        radii.push(T::one() - T::lit(1e-6));
        radii.push(T::one());
        Self::new(radii).expect("valid grid")
    }

    /// [`standard`](Self::standard) without the unit circle.
    pub fn interior() -> Self {
        let mut g = Self::standard();
        g.radii.pop();
        g
    }

    /// Only the unit circle.
    pub fn boundary() -> Self {
        Self { radii: vec![T::one()] }
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }
}

/// `∫_T |f(r e^{iθ})|ᵖ dm(θ)` for each radius of the grid.
pub fn circle_means<T: Real>(
    f: &TestFunction<T>,
    p: HardyExponent<T>,
    q: &CircleQuadrature<T>,
    radii: &RadiusGrid<T>,
) -> Result<Vec<T>, HardyError> {
    let p = p.get();
    radii
        .radii()
        .iter()
        .map(|&r| Ok(q.integrate(|t| f.abs_pow(unit(t) * r, p))?))
        .collect()
}

/// `‖f‖ᵖ` as the largest circle mean over the radius grid.
pub fn norm_boundary<T: Real>(
    f: &TestFunction<T>,
    p: HardyExponent<T>,
    q: &CircleQuadrature<T>,
    radii: &RadiusGrid<T>,
) -> Result<T, HardyError> {
    Ok(circle_means(f, p, q, radii)?.into_iter().fold(T::zero(), T::max))
}

/// `‖f‖ᵖ = |f(0)|ᵖ + (p²/2) ∬ |f|^{p−2} |f′|² log(1/|z|) dA`.
pub fn norm_hardy_stein<T: Real>(
    f: &TestFunction<T>,
    p: HardyExponent<T>,
    q: &DiskQuadrature<T>,
) -> Result<T, HardyError> {
    let pp = p.get();
    norm_hardy_stein_with(f, p, q, pp * pp / T::lit(2.0))
}

/// Hardy–Stein sum with a caller-chosen constant in front of the area term.
pub fn norm_hardy_stein_with<T: Real>(
    f: &TestFunction<T>,
    p: HardyExponent<T>,
    q: &DiskQuadrature<T>,
    constant: T,
) -> Result<T, HardyError> {
    let pp = p.get();
    let two = T::lit(2.0);
    if pp < two && !f.zero_free() {
        return Err(HardyError::NotZeroFree {
            tag: f.tag().to_owned(),
            p: pp.as_f64(),
        });
    }
    let half_gap = (pp - two) / two;
    let area = q.integrate(|z| {
        let (fz, dfz) = f.eval_with_deriv(z);
        fz.norm_sqr().powf(half_gap) * dfz.norm_sqr() * neg_log_modulus(z)
    })?;
    let at0 = f.abs_pow(Complex::new(T::zero(), T::zero()), pp);
    Ok(at0 + constant * area)
}

/// Composite Gauss–Legendre rule for the distribution-function integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LayerCakeGrid {
    pub panels: usize,
    pub order: usize,
}

impl Default for LayerCakeGrid {
    fn default() -> Self {
        Self { panels: 4096, order: 8 }
    }
}

/// `∫₀^∞ p λ^{p−1} m(|f| > λ) dλ` from boundary samples on `q`.
///
/// With `u = λᵖ` the integral becomes `∫₀^{max|f|ᵖ} m(|f|ᵖ > u) du`, which
/// removes the `λ^{p−1}` singularity for `p < 1`; the distribution function
/// is read off the sorted samples.
pub fn norm_layer_cake<T: Real>(
    f: &TestFunction<T>,
    p: HardyExponent<T>,
    q: &CircleQuadrature<T>,
    grid: &LayerCakeGrid,
) -> Result<T, HardyError> {
    let pp = p.get();
    let mut values: Vec<T> = q.angles().map(|t| f.abs_pow(unit(t), pp)).collect();
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        let z = unit(q.angle(bad));
        return Err(crate::numerics::NumericsError::NonFiniteNode {
            index: bad,
            re: z.re.as_f64(),
            im: z.im.as_f64(),
        }
        .into());
    }
    values.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
    let n = T::from_usize_lossy(values.len());
    let top = *values.last().expect("quadrature has nodes");
    if top <= T::zero() {
        return Ok(T::zero());
    }
    let distribution = |u: T| {
        let at_or_below = values.partition_point(|&v| v <= u);
        T::from_usize_lossy(values.len() - at_or_below) / n
    };
    let rule: Vec<(T, T)> = gauss_legendre_unit(grid.order.max(1))
        .into_iter()
        .map(|(x, w)| (T::lit(x), T::lit(w)))
        .collect();
    let panels = grid.panels.max(1);
    let width = top / T::from_usize_lossy(panels);
    let mut total = T::zero();
    for k in 0..panels {
        let a = width * T::from_usize_lossy(k);
        let panel: T = rule.iter().map(|&(x, w)| w * distribution(a + width * x)).sum();
        total = total + panel * width;
    }
    Ok(total)
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

    fn cq() -> CircleQuadrature<f64> {
        CircleQuadrature::new(4096).unwrap()
    }

    fn dq() -> DiskQuadrature<f64> {
        DiskQuadrature::new(96, 256, 2).unwrap()
    }

    #[test]
    fn boundary_norm_examples() {
        let z = TestFunction::<f64>::monomial(1);
        for p in [0.5, 1.0, 3.0] {
            let v = norm_boundary(&z, hp(p), &cq(), &RadiusGrid::standard()).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
        let k = TestFunction::constant(c(0.0, 1.5)).unwrap();
        let v = norm_boundary(&k, hp(3.0), &cq(), &RadiusGrid::standard()).unwrap();
        assert!((v - 1.5f64.powi(3)).abs() < 1e-12);
        let ker = TestFunction::raw_kernel(c(0.6, 0.0), 1.0, 1.0).unwrap();
        let v = norm_boundary(&ker, hp(2.0), &cq(), &RadiusGrid::standard()).unwrap();
        assert!((v - 1.5625).abs() < 1e-12);
    }

    #[test]
    fn interior_grid_ends_below_one() {
        let g = RadiusGrid::<f64>::interior();
        assert_eq!(*g.radii().last().unwrap(), 1.0 - 1e-6);
        assert_eq!(RadiusGrid::<f64>::standard().radii().len(), 21);
        assert!(RadiusGrid::new(vec![1.5]).is_err());
    }

    #[test]
    fn circle_means_are_monotone() {
        let f = TestFunction::polynomial(vec![c(0.3, 0.0), c(-1.0, 0.5), c(0.0, 0.7)]).unwrap();
        let m = circle_means(&f, hp(1.3), &cq(), &RadiusGrid::standard()).unwrap();
        assert!(m.windows(2).all(|w| w[1] >= w[0] - 1e-14));
    }

    #[test]
    fn hardy_stein_examples() {
        let k = TestFunction::constant(c(2.0, 0.0)).unwrap();
        assert!((norm_hardy_stein(&k, hp(1.5), &dq()).unwrap() - 2f64.powf(1.5)).abs() < 1e-14);
        let z = TestFunction::<f64>::monomial(1);
        let v = norm_hardy_stein(&z, hp(2.0), &dq()).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{v}");
        let f = TestFunction::polynomial(vec![c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        let hs = norm_hardy_stein(&f, hp(4.0), &dq()).unwrap();
        let nb = norm_boundary(&f, hp(4.0), &cq(), &RadiusGrid::standard()).unwrap();
        assert!(((hs - nb) / nb).abs() < 1e-6, "{hs} vs {nb}");
    }

    #[test]
    fn hardy_stein_needs_zero_free_below_two() {
        let z = TestFunction::<f64>::monomial(1);
        assert!(matches!(
            norm_hardy_stein(&z, hp(1.0), &dq()),
            Err(HardyError::NotZeroFree { .. })
        ));
    }

    #[test]
    fn layer_cake_examples() {
        let g = LayerCakeGrid::default();
        let k = TestFunction::constant(c(0.7, 0.0)).unwrap();
        assert!((norm_layer_cake(&k, hp(2.5), &cq(), &g).unwrap() - 0.7f64.powf(2.5)).abs() < 1e-12);
        let z = TestFunction::<f64>::monomial(1);
        assert!((norm_layer_cake(&z, hp(1.0), &cq(), &g).unwrap() - 1.0).abs() < 1e-12);
        let f = TestFunction::polynomial(vec![c(1.0, 0.0), c(-0.5, 0.0)]).unwrap();
        let lc = norm_layer_cake(&f, hp(2.0), &cq(), &g).unwrap();
        let nb = norm_boundary(&f, hp(2.0), &cq(), &RadiusGrid::standard()).unwrap();
        assert!(((lc - nb) / nb).abs() < 1e-4);
        assert!((nb - 1.25).abs() < 1e-12);
    }

    #[test]
    fn instantiates_for_f32() {
        let z = TestFunction::<f32>::monomial(1);
        let q = CircleQuadrature::<f32>::new(256).unwrap();
        let v = norm_boundary(&z, HardyExponent::new(2.0f32).unwrap(), &q, &RadiusGrid::standard()).unwrap();
        assert!((v - 1.0).abs() < 1e-5);
    }
}
