use num_complex::Complex;
use num_traits::{One, Zero};

use super::{PreimageSet, SelfMap, SymbolError};
use crate::numerics::{poly_roots, PolyCoeffs};
use crate::scalar::unit;
use crate::Real;

/// Boundary angles sampled when certifying `|φ| ≤ 1` on the circle.
const CERTIFY_SAMPLES: usize = 4096;

/// Description of a rational self-map of the disk.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolSpec<T> {
    /// `rotation · Π (z − a)/(1 − āz)`.
    FiniteBlaschke {
        zeros: Vec<Complex<T>>,
        rotation: Complex<T>,
    },
    /// `Σ cₖ zᵏ`, ascending.
    PolynomialMap { coefficients: Vec<Complex<T>> },
    /// `rotation · (z − a)/(1 − āz)`.
    Moebius { a: Complex<T>, rotation: Complex<T> },
    /// `scale · z + offset`.
    AffineContraction { scale: T, offset: Complex<T> },
    /// `outer ∘ inner`.
    Composition {
        outer: Box<SymbolSpec<T>>,
        inner: Box<SymbolSpec<T>>,
    },
}

impl<T: Real> SymbolSpec<T> {
    fn validate(&self) -> Result<(), SymbolError> {
        let bad = |msg: String| Err(SymbolError::InvalidParameters(msg));
        let unimodular = |r: Complex<T>| (r.norm() - T::one()).abs() <= T::tol(1e-12, 16.0);
        match self {
            Self::FiniteBlaschke { zeros, rotation } => {
                if zeros.is_empty() {
                    return bad("a Blaschke product needs at least one zero".into());
                }
                if let Some(a) = zeros.iter().find(|a| !(a.norm() < T::one())) {
                    return bad(format!("Blaschke zero {a} is not inside the disk"));
                }
                if !unimodular(*rotation) {
                    return bad(format!("rotation {rotation} is not unimodular"));
                }
            }
            Self::PolynomialMap { coefficients } => {
                if !coefficients.iter().skip(1).any(|c| !c.is_zero()) {
                    return bad("polynomial symbol must be nonconstant".into());
                }
            }
            Self::Moebius { a, rotation } => {
                if !(a.norm() < T::one()) {
                    return bad(format!("Möbius parameter {a} is not inside the disk"));
                }
                if !unimodular(*rotation) {
                    return bad(format!("rotation {rotation} is not unimodular"));
                }
            }
            Self::AffineContraction { scale, offset } => {
                if !(*scale > T::zero() && *scale <= T::one()) {
                    return bad(format!("affine scale {scale} outside (0, 1]"));
                }
                if *scale + offset.norm() > T::one() + T::tol(1e-12, 16.0) {
                    return bad("affine map needs |scale| + |offset| ≤ 1".into());
                }
            }
            Self::Composition { outer, inner } => {
                outer.validate()?;
                inner.validate()?;
            }
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        match self {
            Self::FiniteBlaschke { zeros, rotation } => zeros.iter().fold(*rotation, |acc, &a| {
                acc * (z - a) / (Complex::<T>::one() - a.conj() * z)
            }),
            Self::PolynomialMap { coefficients } => coefficients
                .iter()
                .rev()
                .fold(Complex::<T>::zero(), |acc, &c| acc * z + c),
            Self::Moebius { a, rotation } => *rotation * (z - a) / (Complex::<T>::one() - a.conj() * z),
            Self::AffineContraction { scale, offset } => z * *scale + offset,
            Self::Composition { outer, inner } => outer.eval(inner.eval(z)),
        }
    }

    pub fn eval_deriv(&self, z: Complex<T>) -> Complex<T> {
        match self {
            Self::FiniteBlaschke { zeros, rotation } => {
                // product rule: Σₖ bₖ' Π_{j≠k} bⱼ
                let factors: Vec<Complex<T>> = zeros
                    .iter()
                    .map(|&a| (z - a) / (Complex::<T>::one() - a.conj() * z))
                    .collect();
                let mut total = Complex::<T>::zero();
                for (k, &a) in zeros.iter().enumerate() {
                    let den = Complex::<T>::one() - a.conj() * z;
                    let mut term = (Complex::<T>::one() * (T::one() - a.norm_sqr())) / (den * den);
                    for (j, &f) in factors.iter().enumerate() {
                        if j != k {
                            term = term * f;
                        }
                    }
                    total = total + term;
                }
                *rotation * total
            }
            Self::PolynomialMap { coefficients } => coefficients
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(Complex::<T>::zero(), |acc, (k, &c)| {
                    acc * z + c * T::from_usize_lossy(k)
                }),
            Self::Moebius { a, rotation } => {
                let den = Complex::<T>::one() - a.conj() * z;
                *rotation * (T::one() - a.norm_sqr()) / (den * den)
            }
            Self::AffineContraction { scale, .. } => Complex::new(*scale, T::zero()),
            Self::Composition { outer, inner } => outer.eval_deriv(inner.eval(z)) * inner.eval_deriv(z),
        }
    }

    /// `(numerator, denominator)` polynomials with `φ = P/Q`.
    fn rational(&self) -> Result<(PolyCoeffs<T>, PolyCoeffs<T>), SymbolError> {
        let one = || PolyCoeffs::constant(Complex::<T>::one());
        Ok(match self {
            Self::FiniteBlaschke { zeros, rotation } => {
                let num = PolyCoeffs::from_roots(zeros).scale(*rotation);
                let den = zeros.iter().fold(one(), |acc, &a| {
                    acc.mul(&PolyCoeffs::new(vec![Complex::<T>::one(), -a.conj()]).expect("nonzero"))
                });
                (num, den)
            }
            Self::PolynomialMap { coefficients } => (PolyCoeffs::new(coefficients.clone())?, one()),
            Self::Moebius { a, rotation } => (
                PolyCoeffs::new(vec![-*a * rotation, *rotation])?,
                PolyCoeffs::new(vec![Complex::<T>::one(), -a.conj()])?,
            ),
            Self::AffineContraction { scale, offset } => {
                (PolyCoeffs::new(vec![*offset, Complex::new(*scale, T::zero())])?, one())
            }
            Self::Composition { outer, inner } => {
                let (p, q) = outer.rational()?;
                let (n, d) = inner.rational()?;
                let deg = p.degree().max(q.degree());
                let homogenize = |poly: &PolyCoeffs<T>| {
                    poly.coeffs()
                        .iter()
                        .enumerate()
                        .fold(PolyCoeffs::constant(Complex::<T>::zero()), |acc, (k, &c)| {
                            acc.add(&n.pow(k).mul(&d.pow(deg - k)).scale(c))
                        })
                };
                (homogenize(&p), homogenize(&q))
            }
        })
    }
}

/// A validated rational self-map of the disk.
///
/// Construction checks the parameters, builds the cleared rational form used
/// for preimage solving, and certifies `|φ(e^{iθ})| ≤ 1 + 1e-10` on a dense
/// boundary sample. By the maximum principle that makes `φ` a self-map.
#[derive(Debug, Clone)]
pub struct Symbol<T> {
    spec: SymbolSpec<T>,
    numerator: PolyCoeffs<T>,
    denominator: PolyCoeffs<T>,
    boundary_sup: T,
}

impl<T: Real> Symbol<T> {
    pub fn new(spec: SymbolSpec<T>) -> Result<Self, SymbolError> {
        spec.validate()?;
        let (numerator, denominator) = spec.rational()?;
        let mut sup = T::zero();
        for j in 0..CERTIFY_SAMPLES {
            let theta = T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(CERTIFY_SAMPLES);
            let m = spec.eval(unit(theta)).norm();
            if !m.is_finite() {
                return Err(SymbolError::NotSelfMap { sup: f64::INFINITY });
            }
            sup = sup.max(m);
        }
        if sup > T::one() + T::tol(1e-10, 256.0) {
            return Err(SymbolError::NotSelfMap { sup: sup.as_f64() });
        }
        Ok(Self {
            spec,
            numerator,
            denominator,
            boundary_sup: sup,
        })
    }

    pub fn identity() -> Self {
        Self::polynomial(vec![Complex::<T>::zero(), Complex::<T>::one()]).expect("identity is a self-map")
    }

    /// `zⁿ`, as a Blaschke product with an `n`-fold zero at the origin.
    pub fn power(n: usize) -> Result<Self, SymbolError> {
        Self::blaschke(vec![Complex::<T>::zero(); n], Complex::<T>::one())
    }

    pub fn blaschke(zeros: Vec<Complex<T>>, rotation: Complex<T>) -> Result<Self, SymbolError> {
        Self::new(SymbolSpec::FiniteBlaschke { zeros, rotation })
    }

    pub fn polynomial(coefficients: Vec<Complex<T>>) -> Result<Self, SymbolError> {
        Self::new(SymbolSpec::PolynomialMap { coefficients })
    }

    /// The automorphism `ψ_a(z) = (z − a)/(1 − āz)`.
    pub fn moebius(a: Complex<T>) -> Result<Self, SymbolError> {
        Self::moebius_rotated(a, Complex::<T>::one())
    }

    pub fn moebius_rotated(a: Complex<T>, rotation: Complex<T>) -> Result<Self, SymbolError> {
        Self::new(SymbolSpec::Moebius { a, rotation })
    }

    /// `z ↦ e^{iα} z`.
    pub fn rotation(alpha: T) -> Self {
        Self::moebius_rotated(Complex::<T>::zero(), unit(alpha)).expect("rotations are automorphisms")
    }

    pub fn affine(scale: T, offset: Complex<T>) -> Result<Self, SymbolError> {
        Self::new(SymbolSpec::AffineContraction { scale, offset })
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, SymbolError> {
        Self::new(SymbolSpec::Composition {
            outer: Box::new(outer.spec.clone()),
            inner: Box::new(inner.spec.clone()),
        })
    }

    pub fn spec(&self) -> &SymbolSpec<T> {
        &self.spec
    }

    pub fn numerator(&self) -> &PolyCoeffs<T> {
        &self.numerator
    }

    pub fn denominator(&self) -> &PolyCoeffs<T> {
        &self.denominator
    }

    /// Degree of the rational map (number of preimages of a generic point of
    /// the Riemann sphere).
    pub fn degree(&self) -> usize {
        self.numerator.degree().max(self.denominator.degree())
    }

    pub fn boundary_sup(&self) -> T {
        self.boundary_sup
    }

    /// Whether `|φ| = 1` on the whole boundary sample (finite Blaschke
    /// products and their compositions).
    pub fn is_inner(&self) -> bool {
        (0..256).all(|j| {
            let theta = T::TAU() * (T::from_usize_lossy(j) + T::lit(0.37)) / T::lit(256.0);
            (self.spec.eval(unit(theta)).norm() - T::one()).abs() <= T::tol(1e-10, 256.0)
        })
    }

    fn cleared(&self, w: Complex<T>) -> Option<PolyCoeffs<T>> {
        let p = self.numerator.add(&self.denominator.scale(-w));
        (p.degree() >= 1).then_some(p)
    }
}

impl<T: Real> SelfMap<T> for Symbol<T> {
    fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.spec.eval(z)
    }

    fn eval_deriv(&self, z: Complex<T>) -> Complex<T> {
        self.spec.eval_deriv(z)
    }

    fn preimages(&self, w: Complex<T>) -> Result<PreimageSet<T>, SymbolError> {
        if !(w.norm() < T::one()) {
            return Err(SymbolError::TargetOutsideDisk {
                modulus: w.norm().as_f64(),
            });
        }
        let mut set = PreimageSet {
            points: Vec::new(),
            boundary_proximal: false,
        };
        let Some(poly) = self.cleared(w) else {
            return Ok(set);
        };
        let edge = T::tol(1e-12, 16.0);
        let residual_tol = T::tol(1e-10, 4096.0);
        let den_floor = T::epsilon() * T::lit(1e3) * self.denominator.max_abs_coeff();
        for root in poly_roots(&poly)? {
            let z = root.value;
            let r = z.norm();
            if (r - T::one()).abs() <= edge {
                set.boundary_proximal = true;
                continue;
            }
            if r > T::one() {
                continue;
            }
            if self.denominator.eval(z).norm() <= den_floor {
                // common factor of numerator and denominator, not a preimage
                continue;
            }
            let residual = (self.eval(z) - w).norm();
            if !(residual <= residual_tol) {
                return Err(SymbolError::PreimageResidual {
                    re: z.re.as_f64(),
                    im: z.im.as_f64(),
                    residual: residual.as_f64(),
                });
            }
            set.points.push((z, root.multiplicity));
        }
        Ok(set)
    }

    fn level_points(&self, w: Complex<T>) -> Result<Vec<Complex<T>>, SymbolError> {
        Ok(match self.cleared(w) {
            Some(p) => poly_roots(&p)?.into_iter().map(|r| r.value).collect(),
            None => Vec::new(),
        })
    }

    fn tag(&self) -> String {
        self.spec.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Symbol::<f64>::identity().eval(c(0.3, 0.4)), c(0.3, 0.4));
        let psi = Symbol::moebius(c(0.5, 0.0)).unwrap();
        assert!(close(psi.eval(c(0.5, 0.0)), c(0.0, 0.0), 1e-16));
        let sq = Symbol::<f64>::power(2).unwrap();
        assert!(close(sq.eval(unit(PI / 4.0)), unit(PI / 2.0), 1e-15));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(Symbol::<f64>::identity().eval_deriv(c(0.2, -0.7)), c(1.0, 0.0));
        let sq = Symbol::<f64>::power(2).unwrap();
        assert!(close(sq.eval_deriv(c(0.5, 0.0)), c(1.0, 0.0), 1e-15));
        let psi = Symbol::moebius(c(0.5, 0.0)).unwrap();
        assert!(close(psi.eval_deriv(c(0.0, 0.0)), c(0.75, 0.0), 1e-15));
    }

    #[test]
    fn derivatives_match_central_differences() {
        let b = Symbol::blaschke(vec![c(0.0, 0.0), c(0.5, 0.0), c(-0.3, 0.4)], unit(0.3)).unwrap();
        let comp = Symbol::compose(&Symbol::moebius(c(0.5, 0.0)).unwrap(), &Symbol::power(2).unwrap()).unwrap();
        let poly = Symbol::polynomial(vec![c(0.1, 0.0), c(0.5, 0.1), c(0.0, 0.3)]).unwrap();
        let h = 1e-6;
        for s in [&b, &comp, &poly] {
            for z in [c(0.1, 0.2), c(-0.6, 0.3), c(0.0, -0.9)] {
                let fd = (s.eval(z + h) - s.eval(z - h)) / (2.0 * h);
                assert!(close(fd, s.eval_deriv(z), 1e-8), "{} at {z}", s.tag());
            }
        }
    }

    #[test]
    fn preimage_examples() {
        let id = Symbol::<f64>::identity();
        let p = id.preimages(c(0.0, 0.4)).unwrap();
        assert_eq!(p.points.len(), 1);
        assert!(close(p.points[0].0, c(0.0, 0.4), 1e-15));

        let sq = Symbol::<f64>::power(2).unwrap();
        let mut pts: Vec<C> = sq.preimages(c(0.25, 0.0)).unwrap().points.iter().map(|p| p.0).collect();
        pts.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!(close(pts[0], c(-0.5, 0.0), 1e-14) && close(pts[1], c(0.5, 0.0), 1e-14));

        let aff = Symbol::affine(0.8, c(0.0, 0.0)).unwrap();
        let p = aff.preimages(c(0.5, 0.0)).unwrap();
        assert!(close(p.points[0].0, c(0.625, 0.0), 1e-15));
        assert!(aff.preimages(c(0.9, 0.0)).unwrap().is_empty());
    }

    #[test]
    fn preimage_of_origin_under_square_is_double() {
        let sq = Symbol::<f64>::power(2).unwrap();
        let p = sq.preimages(c(0.0, 0.0)).unwrap();
        assert_eq!(p.points, vec![(c(0.0, 0.0), 2)]);
    }

    #[test]
    fn boundary_values() {
        let id = Symbol::<f64>::identity();
        assert!(close(id.boundary_pushforward_point(PI / 3.0), unit(PI / 3.0), 1e-15));
        let half = Symbol::affine(0.5, c(0.5, 0.0)).unwrap();
        assert!(close(half.boundary_pushforward_point(PI), c(0.0, 0.0), 1e-15));
        let w = half.boundary_pushforward_point(PI / 2.0);
        assert!(close(w, c(0.5, 0.5), 1e-15));
        assert!((w.norm() - (PI / 4.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn construction_rejects_non_self_maps() {
        assert!(matches!(
            Symbol::polynomial(vec![c(0.5, 0.0), c(0.6, 0.0)]),
            Err(SymbolError::NotSelfMap { .. })
        ));
        assert!(Symbol::<f64>::polynomial(vec![c(0.5, 0.0)]).is_err());
        assert!(Symbol::moebius(c(1.0, 0.0)).is_err());
        assert!(Symbol::blaschke(vec![c(0.2, 0.0)], c(2.0, 0.0)).is_err());
        assert!(Symbol::<f64>::blaschke(vec![], c(1.0, 0.0)).is_err());
        assert!(Symbol::affine(0.8, c(0.3, 0.0)).is_err());
        assert!(Symbol::affine(0.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn inverse_automorphism_and_involution() {
        for a in [c(0.5, 0.0), c(-0.3, 0.6), c(0.0, 0.95)] {
            let psi = Symbol::moebius(a).unwrap();
            let inv = Symbol::moebius(-a).unwrap();
            let involution = Symbol::moebius_rotated(a, c(-1.0, 0.0)).unwrap();
            for z in [c(0.1, 0.2), c(-0.7, 0.1), c(0.0, -0.99)] {
                assert!(close(inv.eval(psi.eval(z)), z, 1e-10));
                assert!(close(involution.eval(involution.eval(z)), z, 1e-10));
            }
        }
    }

    #[test]
    fn blaschke_degree_conservation() {
        let b = Symbol::blaschke(vec![c(0.0, 0.0), c(0.5, 0.0), c(-0.3, 0.4)], c(1.0, 0.0)).unwrap();
        assert_eq!(b.degree(), 3);
        assert!(b.is_inner());
        for w in [c(0.1, 0.1), c(-0.8, 0.2), c(0.0, 0.97)] {
            let p = b.preimages(w).unwrap();
            assert_eq!(p.total_multiplicity(), 3);
            for (z, _) in p.points {
                assert!((b.eval(z) - w).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn composition_rational_form_matches_tree() {
        let comp = Symbol::compose(&Symbol::moebius(c(0.5, 0.0)).unwrap(), &Symbol::power(2).unwrap()).unwrap();
        assert_eq!(comp.degree(), 2);
        for z in [c(0.3, -0.2), c(-0.5, 0.5)] {
            let rat = comp.numerator().eval(z) / comp.denominator().eval(z);
            assert!(close(rat, comp.eval(z), 1e-14));
        }
        assert!(!Symbol::affine(0.5, c(0.5, 0.0)).unwrap().is_inner());
    }

    #[test]
    fn target_outside_disk_is_rejected() {
        let id = Symbol::<f64>::identity();
        assert!(matches!(
            id.preimages(c(1.0, 0.0)),
            Err(SymbolError::TargetOutsideDisk { .. })
        ));
    }

    #[test]
    fn level_points_include_exterior_solutions() {
        let half = Symbol::affine(0.5, c(0.5, 0.0)).unwrap();
        let pts = half.level_points(c(-1.0, 0.0)).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(close(pts[0], c(-3.0, 0.0), 1e-14));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn disk_point(max: f64) -> impl Strategy<Value = C> {
            (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
        }

        proptest! {
            #[test]
            fn preimages_round_trip(w in disk_point(0.999), zs in proptest::collection::vec(disk_point(0.9), 1..4)) {
                let b = Symbol::blaschke(zs.clone(), c(1.0, 0.0)).unwrap();
                let p = b.preimages(w).unwrap();
                prop_assert_eq!(p.total_multiplicity(), zs.len());
                for (z, _) in p.points {
                    prop_assert!(z.norm() < 1.0);
                    prop_assert!((b.eval(z) - w).norm() <= 1e-10);
                }
            }

            #[test]
            fn affine_image_containment(r in 0.05f64..0.9, s in 0.0f64..0.09, w in disk_point(0.999)) {
                let aff = Symbol::affine(r, c(s, 0.0)).unwrap();
                if w.norm() > r + s {
                    prop_assert!(aff.preimages(w).unwrap().is_empty());
                }
            }
        }
    }
}
