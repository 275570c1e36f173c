use num_complex::Complex;
use num_traits::Zero;

use super::NumericsError;
use crate::Real;

/// Polynomial with complex coefficients in ascending degree order.
///
/// Trailing (high-degree) exact zeros are trimmed on construction, so the
/// stored leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> PolyCoeffs<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Result<Self, NumericsError> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(NumericsError::Degenerate("zero polynomial".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(NumericsError::Degenerate("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn monomial(c: Complex<T>, degree: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs).unwrap_or_else(|_| Self::constant(Complex::zero()))
    }

    /// Monic polynomial `Π (z − rᵢ)`.
    pub fn from_roots(roots: &[Complex<T>]) -> Self {
        let mut p = Self::constant(Complex::new(T::one(), T::zero()));
        for &r in roots {
            p = p.mul(&Self {
                coeffs: vec![-r, Complex::new(T::one(), T::zero())],
            });
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex<T> {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` by a single Horner sweep.
    pub fn eval_with_deriv(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut p = Complex::zero();
        let mut dp = Complex::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn deriv(&self) -> Self {
        if self.degree() == 0 {
            return Self::constant(Complex::zero());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * T::from_usize_lossy(k))
            .collect();
        Self { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
                    + other.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
            })
            .collect();
        Self::new(coeffs).unwrap_or_else(|_| Self::constant(Complex::zero()))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect()).unwrap_or_else(|_| Self::constant(Complex::zero()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![Complex::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j] + a * b;
            }
        }
        Self::new(coeffs).unwrap_or_else(|_| Self::constant(Complex::zero()))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::constant(Complex::new(T::one(), T::zero()));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }
}

/// A root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub value: Complex<T>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Roots closer than this (relative to `max(1, |z|)`) are merged into one
    /// root with summed multiplicity.
    pub cluster_tol: f64,
    /// Accepted residual `|p(z)| ≤ residual_tol · max|coeff| · max(1, |z|)^deg`.
    pub residual_tol: f64,
    pub max_iterations: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            cluster_tol: 1e-8,
            residual_tol: 1e-12,
            max_iterations: 500,
        }
    }
}

pub fn poly_roots<T: Real>(p: &PolyCoeffs<T>) -> Result<Vec<Root<T>>, NumericsError> {
    poly_roots_with(p, &RootOptions::default())
}

/// All complex roots of `p` counted with multiplicity.
///
/// Exact zero roots are factored out first; degrees one and two use closed
/// forms, higher degrees Aberth–Ehrlich simultaneous iteration. Every root
/// is then Newton-polished and its residual checked.
pub fn poly_roots_with<T: Real>(p: &PolyCoeffs<T>, opts: &RootOptions) -> Result<Vec<Root<T>>, NumericsError> {
    if p.degree() == 0 {
        return Err(NumericsError::Degenerate("root finding needs degree at least 1".into()));
    }
    let zeros_at_origin = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    let reduced = PolyCoeffs {
        coeffs: p.coeffs[zeros_at_origin..].to_vec(),
    };
    let mut approx = match reduced.degree() {
        0 => Vec::new(),
        1 => vec![-reduced.coeffs[0] / reduced.coeffs[1]],
        2 => quadratic(&reduced),
        _ => aberth(&reduced, opts.max_iterations),
    };
    for z in approx.iter_mut() {
        *z = polish(&reduced, *z);
    }

    let scale = reduced.max_abs_coeff();
    let tol = T::tol(opts.residual_tol, 4096.0);
    let d = reduced.degree() as i32;
    let residuals: Vec<T> = approx
        .iter()
        .map(|&z| reduced.eval(z).norm() / (scale * z.norm().max(T::one()).powi(d)))
        .collect();
    if residuals.iter().any(|r| !(*r <= tol)) {
        return Err(NumericsError::RootNonConvergence {
            degree: p.degree(),
            iterations: opts.max_iterations,
            residuals: residuals.iter().map(|r| r.as_f64()).collect(),
        });
    }

    let mut roots: Vec<Root<T>> = Vec::with_capacity(approx.len() + 1);
    if zeros_at_origin > 0 {
        roots.push(Root {
            value: Complex::zero(),
            multiplicity: zeros_at_origin,
        });
    }
    roots.extend(approx.into_iter().map(|value| Root { value, multiplicity: 1 }));
    Ok(cluster(roots, T::tol(opts.cluster_tol, 64.0)))
}

fn quadratic<T: Real>(p: &PolyCoeffs<T>) -> Vec<Complex<T>> {
    let (c, b, a) = (p.coeffs[0], p.coeffs[1], p.coeffs[2]);
    let disc = (b * b - a * c * T::lit(4.0)).sqrt();
    let q = if (b.conj() * disc).re >= T::zero() {
        -(b + disc) * T::lit(0.5)
    } else {
        -(b - disc) * T::lit(0.5)
    };
    if q.is_zero() {
        vec![Complex::zero(); 2]
    } else {
        vec![q / a, c / q]
    }
}

fn aberth<T: Real>(p: &PolyCoeffs<T>, max_iterations: usize) -> Vec<Complex<T>> {
    let n = p.degree();
    let lead = p.leading().norm();
    // Start on a circle whose radius is the geometric mean of the root moduli.
    let radius = (p.coeffs[0].norm() / lead).powf(T::one() / T::from_usize_lossy(n));
    let radius = if radius.is_finite() && radius > T::zero() {
        radius
    } else {
        T::one()
    };
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let t = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n) + T::lit(0.4);
            Complex::from_polar(radius, t)
        })
        .collect();
    let tiny = T::epsilon() * T::lit(4.0);
    for _ in 0..max_iterations {
        let mut converged = true;
        for i in 0..n {
            let (pv, dpv) = p.eval_with_deriv(z[i]);
            if pv.is_zero() {
                continue;
            }
            let ratio = pv / dpv;
            let mut s = Complex::zero();
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    s = s + (z[i] - zj).inv();
                }
            }
            let step = ratio / (Complex::new(T::one(), T::zero()) - ratio * s);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] = z[i] - step;
                if step.norm() > tiny * z[i].norm().max(T::one()) {
                    converged = false;
                }
            }
        }
        if converged {
            break;
        }
    }
    z
}

fn polish<T: Real>(p: &PolyCoeffs<T>, mut z: Complex<T>) -> Complex<T> {
    let mut best = p.eval(z).norm();
    for _ in 0..8 {
        let (pv, dpv) = p.eval_with_deriv(z);
        if pv.is_zero() || dpv.is_zero() {
            break;
        }
        let cand = z - pv / dpv;
        let r = p.eval(cand).norm();
        if !(r < best) {
            break;
        }
        best = r;
        z = cand;
    }
    z
}

fn cluster<T: Real>(mut roots: Vec<Root<T>>, tol: T) -> Vec<Root<T>> {
    let mut out: Vec<Root<T>> = Vec::with_capacity(roots.len());
    roots.sort_by(|a, b| {
        a.value
            .re
            .as_f64()
            .total_cmp(&b.value.re.as_f64())
            .then(a.value.im.as_f64().total_cmp(&b.value.im.as_f64()))
    });
    'next: for r in roots {
        for c in out.iter_mut() {
            if (c.value - r.value).norm() <= tol * c.value.norm().max(T::one()) {
                // exact zeros keep their exact location
                if !c.value.is_zero() {
                    let (m1, m2) = (T::from_usize_lossy(c.multiplicity), T::from_usize_lossy(r.multiplicity));
                    c.value = (c.value * m1 + r.value * m2) / (m1 + m2);
                }
                c.multiplicity += r.multiplicity;
                continue 'next;
            }
        }
        out.push(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn sorted(mut v: Vec<Root<f64>>) -> Vec<Root<f64>> {
        v.sort_by(|a, b| {
            a.value
                .re
                .total_cmp(&b.value.re)
                .then(a.value.im.total_cmp(&b.value.im))
        });
        v
    }

    #[test]
    fn z_squared_minus_one() {
        let p = PolyCoeffs::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = sorted(poly_roots(&p).unwrap());
        assert_eq!(r.len(), 2);
        assert!((r[0].value - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((r[1].value - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn double_root_at_origin() {
        let p = PolyCoeffs::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = poly_roots(&p).unwrap();
        assert_eq!(
            r,
            vec![Root {
                value: c(0.0, 0.0),
                multiplicity: 2
            }]
        );
    }

    #[test]
    fn construct_then_solve_cubic() {
        let want = [c(0.3, 0.0), c(0.0, 0.7), c(-0.5, 0.0)];
        let p = PolyCoeffs::from_roots(&want);
        let got = poly_roots(&p).unwrap();
        assert_eq!(got.len(), 3);
        for w in want {
            let best = got.iter().map(|r| (r.value - w).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10, "{w} missing ({best})");
        }
    }

    #[test]
    fn clustered_double_root_merges() {
        // (z − 0.5)² (z + 0.25): Aberth returns the double root to ~√ε;
        // polishing plus clustering merges the pair.
        let p = PolyCoeffs::from_roots(&[c(0.5, 0.0), c(0.5, 0.0), c(-0.25, 0.0)]);
        let got = poly_roots(&p).unwrap();
        let total: usize = got.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total, 3);
        assert!(got
            .iter()
            .any(|r| r.multiplicity == 2 && (r.value - c(0.5, 0.0)).norm() < 1e-7));
    }

    #[test]
    fn degree_zero_is_rejected() {
        let p = PolyCoeffs::new(vec![c(2.0, 0.0)]).unwrap();
        assert!(poly_roots(&p).is_err());
        assert!(PolyCoeffs::<f64>::new(vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn high_degree_roots_of_unity() {
        let mut coeffs = vec![c(0.0, 0.0); 13];
        coeffs[0] = c(-1.0, 0.0);
        coeffs[12] = c(1.0, 0.0);
        let r = poly_roots(&PolyCoeffs::new(coeffs).unwrap()).unwrap();
        assert_eq!(r.len(), 12);
        for root in r {
            assert!((root.value.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn arithmetic() {
        let p = PolyCoeffs::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let q = p.mul(&p);
        assert_eq!(q.coeffs(), &[c(1.0, 0.0), c(4.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(q.deriv().coeffs(), &[c(4.0, 0.0), c(8.0, 0.0)]);
        assert_eq!(p.pow(2), q);
        let (v, dv) = q.eval_with_deriv(c(0.5, 0.0));
        assert_eq!(v, c(4.0, 0.0));
        assert_eq!(dv, c(8.0, 0.0));
        assert!(p.add(&p.scale(c(-1.0, 0.0))).is_zero());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn point() -> impl Strategy<Value = Complex<f64>> {
            (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(a, b)| c(a, b))
        }

        proptest! {
            #[test]
            fn rebuild_matches_input(roots in proptest::collection::vec(point(), 1..7)) {
                let p = PolyCoeffs::from_roots(&roots);
                let got = poly_roots(&p).unwrap();
                let total: usize = got.iter().map(|r| r.multiplicity).sum();
                prop_assert_eq!(total, roots.len());
                let expanded: Vec<Complex<f64>> = got
                    .iter()
                    .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
                    .collect();
                let rebuilt = PolyCoeffs::from_roots(&expanded);
                let scale = p.max_abs_coeff();
                for (a, b) in rebuilt.coeffs().iter().zip(p.coeffs()) {
                    prop_assert!((a - b).norm() <= 1e-8 * scale, "{} vs {}", a, b);
                }
            }
        }
    }
}
