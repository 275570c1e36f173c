//! The Nevanlinna counting function `N_φ`, the ratio `τ_φ = N_φ / log(1/|z|)`
//! and the non-univalent change of variable formula.

use std::collections::HashMap;
use std::sync::RwLock;

use num_complex::Complex;
use rayon::prelude::*;
use thiserror::Error;

use crate::numerics::{DiskQuadrature, NumericsError};
use crate::scalar::neg_log_modulus;
use crate::symbols::{SelfMap, SymbolError};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NevanlinnaError {
    #[error("N_φ is not defined at w = φ(0) = ({re}, {im})")]
    AtImageOfOrigin { re: f64, im: f64 },
    #[error("point must lie in the open disk (|w| = {0})")]
    OutsideDisk(f64),
    #[error("τ_φ is not defined at the origin")]
    AtOrigin,
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `N_φ(w) = Σ_{φ(z)=w} log(1/|z|)` with multiplicity; zero off the image.
pub fn counting<T, S>(phi: &S, w: Complex<T>) -> Result<T, NevanlinnaError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    if !(w.norm() < T::one()) {
        return Err(NevanlinnaError::OutsideDisk(w.norm().as_f64()));
    }
    let origin = phi.at_origin();
    if (w - origin).norm() <= T::epsilon() * T::lit(4.0) {
        return Err(NevanlinnaError::AtImageOfOrigin {
            re: origin.re.as_f64(),
            im: origin.im.as_f64(),
        });
    }
    Ok(phi
        .preimages(w)?
        .points
        .iter()
        .map(|&(z, m)| neg_log_modulus(z) * T::from_usize_lossy(m))
        .sum())
}

/// `τ_φ(z) = N_φ(z) / log(1/|z|)`, taken as 0 where `N_φ` vanishes.
pub fn tau<T, S>(phi: &S, z: Complex<T>) -> Result<T, NevanlinnaError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    if z.norm() == T::zero() {
        return Err(NevanlinnaError::AtOrigin);
    }
    let n = counting(phi, z)?;
    Ok(if n == T::zero() { n } else { n / neg_log_modulus(z) })
}

/// Membership of `z` in `G_c = {τ_φ > c}`.
pub fn in_gc<T, S>(phi: &S, z: Complex<T>, c: T) -> Result<bool, NevanlinnaError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    Ok(tau(phi, z)? > c)
}

/// `τ_φ` with a memo table keyed by the exact bits of the point.
///
/// Lookups take a read lock; a miss computes outside any lock and inserts
/// under the write lock, so concurrent inserts of the same point agree.
pub struct TauField<'a, T> {
    symbol: &'a (dyn SelfMap<T> + 'a),
    thresholds: Vec<T>,
    cache: RwLock<HashMap<(u64, u64), T>>,
}

impl<'a, T: Real> TauField<'a, T> {
    pub fn new(symbol: &'a (dyn SelfMap<T> + 'a), thresholds: Vec<T>) -> Self {
        Self {
            symbol,
            thresholds,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn thresholds(&self) -> &[T] {
        &self.thresholds
    }

    pub fn tau(&self, z: Complex<T>) -> Result<T, NevanlinnaError> {
        let key = (z.re.as_f64().to_bits(), z.im.as_f64().to_bits());
        if let Some(&v) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let v = tau(self.symbol, z)?;
        self.cache.write().expect("cache lock").entry(key).or_insert(v);
        Ok(v)
    }

    pub fn in_gc(&self, z: Complex<T>, c: T) -> Result<bool, NevanlinnaError> {
        Ok(self.tau(z)? > c)
    }

    /// `[τ > c]` for every configured threshold.
    pub fn memberships(&self, z: Complex<T>) -> Result<Vec<bool>, NevanlinnaError> {
        let t = self.tau(z)?;
        Ok(self.thresholds.iter().map(|&c| t > c).collect())
    }

    pub fn cached(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

/// `N_φ` tabulated on the nodes of a disk quadrature (ring-major order).
#[derive(Debug, Clone)]
pub struct CountingTable<T> {
    values: Vec<T>,
}

impl<T: Real> CountingTable<T> {
    pub fn build<S>(phi: &S, q: &DiskQuadrature<T>) -> Result<Self, NevanlinnaError>
    where
        S: SelfMap<T> + ?Sized,
    {
        let values: Vec<Result<T, NevanlinnaError>> = q.map_nodes(|w| counting(phi, w));
        Ok(Self {
            values: values.into_iter().collect::<Result<_, _>>()?,
        })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `∬ g(w) N_φ(w) dA(w)`.
    pub fn integrate_against<G>(&self, g: G, q: &DiskQuadrature<T>) -> Result<T, NevanlinnaError>
    where
        G: Fn(Complex<T>) -> T + Sync,
    {
        assert_eq!(self.values.len(), q.len(), "table built on a different rule");
        let weighted: Vec<T> = (0..q.len())
            .into_par_iter()
            .map(|i| {
                let n = self.values[i];
                if n == T::zero() {
                    T::zero()
                } else {
                    g(q.node(i).0) * n
                }
            })
            .collect();
        Ok(q.integrate_values(&weighted)?)
    }
}

/// Both sides of `∬ g(φ)|φ′|² log(1/|z|) dA = C ∬ g N_φ dA`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ChangeOfVariableReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs| / max(|lhs|, |rhs|)`.
    pub relative_gap: f64,
    /// Constant `C` used on the right-hand side.
    pub constant: f64,
    /// Constant printed in the source statement of the formula. The
    /// `φ = id, g ≡ 1` case (both sides 1/2) rules it out.
    pub displayed_constant: f64,
}

pub const CHANGE_OF_VARIABLE_CONSTANT: f64 = 1.0;
pub const CHANGE_OF_VARIABLE_DISPLAYED_CONSTANT: f64 = 2.0;

pub fn verify_change_of_variable<T, S, G>(
    phi: &S,
    g: G,
    q: &DiskQuadrature<T>,
) -> Result<ChangeOfVariableReport, NevanlinnaError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
    G: Fn(Complex<T>) -> T + Sync,
{
    let table = CountingTable::build(phi, q)?;
    verify_change_of_variable_with(phi, g, q, &table)
}

/// As [`verify_change_of_variable`] with a prebuilt counting table.
pub fn verify_change_of_variable_with<T, S, G>(
    phi: &S,
    g: G,
    q: &DiskQuadrature<T>,
    table: &CountingTable<T>,
) -> Result<ChangeOfVariableReport, NevanlinnaError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
    G: Fn(Complex<T>) -> T + Sync,
{
    let lhs = q.integrate(|z| g(phi.eval(z)) * phi.eval_deriv(z).norm_sqr() * neg_log_modulus(z))?;
    let rhs = table.integrate_against(&g, q)? * T::lit(CHANGE_OF_VARIABLE_CONSTANT);
    let (lhs, rhs) = (lhs.as_f64(), rhs.as_f64());
    let scale = lhs.abs().max(rhs.abs());
    Ok(ChangeOfVariableReport {
        lhs,
        rhs,
        relative_gap: if scale > 0.0 { (lhs - rhs).abs() / scale } else { 0.0 },
        constant: CHANGE_OF_VARIABLE_CONSTANT,
        displayed_constant: CHANGE_OF_VARIABLE_DISPLAYED_CONSTANT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::Symbol;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    #[test]
    fn counting_examples() {
        let id = Symbol::<f64>::identity();
        assert!((counting(&id, c(0.5, 0.0)).unwrap() - 2f64.ln()).abs() < 1e-15);
        let sq = Symbol::<f64>::power(2).unwrap();
        assert!((counting(&sq, c(0.25, 0.0)).unwrap() - 4f64.ln()).abs() < 1e-14);
        let aff = Symbol::affine(0.8, c(0.0, 0.0)).unwrap();
        assert_eq!(counting(&aff, c(0.9, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn counting_domain_errors() {
        let id = Symbol::<f64>::identity();
        assert!(matches!(
            counting(&id, c(0.0, 0.0)),
            Err(NevanlinnaError::AtImageOfOrigin { .. })
        ));
        assert!(matches!(
            counting(&id, c(1.0, 0.0)),
            Err(NevanlinnaError::OutsideDisk(_))
        ));
        let shifted = Symbol::affine(0.5, c(0.5, 0.0)).unwrap();
        assert!(counting(&shifted, c(0.0, 0.0)).is_ok());
        assert!(counting(&shifted, c(0.5, 0.0)).is_err());
    }

    #[test]
    fn tau_examples() {
        let id = Symbol::<f64>::identity();
        assert!((tau(&id, c(0.3, -0.6)).unwrap() - 1.0).abs() < 1e-14);
        let sq = Symbol::<f64>::power(2).unwrap();
        assert!((tau(&sq, c(0.25, 0.0)).unwrap() - 1.0).abs() < 1e-14);
        let aff = Symbol::affine(0.8, c(0.0, 0.0)).unwrap();
        let expected = 1.6f64.ln() / 2f64.ln();
        assert!((tau(&aff, c(0.5, 0.0)).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.6781).abs() < 1e-4);
        assert!(matches!(tau(&id, c(0.0, 0.0)), Err(NevanlinnaError::AtOrigin)));
    }

    #[test]
    fn gc_examples() {
        let id = Symbol::<f64>::identity();
        assert!(in_gc(&id, c(0.5, 0.0), 0.5).unwrap());
        let aff = Symbol::affine(0.8, c(0.0, 0.0)).unwrap();
        assert!(!in_gc(&aff, c(0.99, 0.0), 0.5).unwrap());
        let sq = Symbol::<f64>::power(2).unwrap();
        assert!(in_gc(&sq, c(0.9, 0.0), 0.99).unwrap());
    }

    #[test]
    fn tau_field_caches_concurrently() {
        let sq = Symbol::<f64>::power(2).unwrap();
        let field = TauField::new(&sq, vec![0.5, 0.99]);
        let pts: Vec<C> = (1..50).map(|k| c(0.018 * k as f64, 0.01)).collect();
        let a: Vec<f64> = pts.par_iter().map(|&z| field.tau(z).unwrap()).collect();
        let b: Vec<f64> = pts.par_iter().map(|&z| field.tau(z).unwrap()).collect();
        assert_eq!(a, b);
        assert_eq!(field.cached(), pts.len());
        assert_eq!(field.memberships(c(0.5, 0.0)).unwrap(), vec![true, true]);
    }

    #[test]
    fn change_of_variable_identity_case() {
        let q = DiskQuadrature::new(128, 64, 2).unwrap();
        let id = Symbol::<f64>::identity();
        let r = verify_change_of_variable(&id, |_| 1.0, &q).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-8 && (r.rhs - 0.5).abs() < 1e-8);
        assert!(r.relative_gap < 1e-6);
        assert_eq!((r.constant, r.displayed_constant), (1.0, 2.0));
    }

    #[test]
    fn change_of_variable_square_and_moebius() {
        let q = DiskQuadrature::new(256, 512, 2).unwrap();
        let sq = Symbol::<f64>::power(2).unwrap();
        assert!(verify_change_of_variable(&sq, |_| 1.0, &q).unwrap().relative_gap < 1e-4);
        let psi = Symbol::moebius(c(0.5, 0.0)).unwrap();
        let r = verify_change_of_variable(&psi, |w: C| w.norm_sqr(), &q).unwrap();
        assert!(r.relative_gap < 1e-4, "{r:?}");
    }
}
