use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use super::config::{DirectProbeConfig, LueckingConfig};
use super::CriteriaError;
use crate::hardy::{
    kernel, norm_boundary, outer_function, BoundaryModulus, HardyExponent, KernelSpec, RadiusGrid, TestFunction,
};
use crate::nevanlinna::{counting, NevanlinnaError};
use crate::numerics::{CircleQuadrature, DiskQuadrature};
use crate::scalar::{neg_log_modulus, unit};
use crate::symbols::SelfMap;
use crate::Real;

/// Weighted area integrals for one probe center `a`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LueckingPoint {
    pub k: usize,
    pub a: (f64, f64),
    /// `∬ |g′|² (1 − |z|²) dA`, exactly `1/2`.
    pub i_full: f64,
    /// The same integral restricted to `G_c`.
    pub i_gc: f64,
    /// `∬ |g′|² N_φ dA`.
    pub i_tau: f64,
    /// `∬ |g′|² log(1/|z|) dA`, the value of `i_tau` when `τ ≡ 1`.
    pub i_log: f64,
}

impl LueckingPoint {
    pub fn gc_ratio(&self) -> f64 {
        self.i_gc / self.i_full
    }

    pub fn tau_ratio(&self) -> f64 {
        self.i_tau / self.i_full
    }

    pub fn tau_log_ratio(&self) -> f64 {
        self.i_tau / self.i_log
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LueckingReport {
    pub symbol: String,
    pub c: f64,
    pub points: Vec<LueckingPoint>,
    pub min_gc_ratio: f64,
    pub min_tau_ratio: f64,
    pub min_tau_log_ratio: f64,
}

/// Area integrals of `|g′|²` against `1_{G_c}(1 − |z|²)`, `N_φ` and
/// `log(1/|z|)`, with `|g′|² = (1 − |a|²)³/|1 − āz|⁶`.
///
/// Substituting `z = (u + a)/(1 + āu)` turns `|g′(z)|²(1 − |z|²) dA(z)` into
/// `(1 − |u|²) dA(u)`, which moves the peak of the weight to the origin of
/// the quadrature `q`.
pub fn luecking_probe<T, S>(
    phi: &S,
    c: T,
    centers: &[(usize, Complex<T>)],
    q: &DiskQuadrature<T>,
) -> Result<LueckingReport, CriteriaError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    let one = Complex::new(T::one(), T::zero());
    let mut points = Vec::with_capacity(centers.len());
    for &(k, a) in centers {
        let a_sq = a.norm_sqr();
        let terms: Vec<Result<[T; 4], NevanlinnaError>> = q.map_nodes(|u| {
            let z = (u + a) / (one + a.conj() * u);
            let base = T::one() - u.norm_sqr();
            // (1 − |u|²)/(1 − |z|²) without cancellation near the circle.
            let jac = (one + a.conj() * u).norm_sqr() / (T::one() - a_sq);
            let (n, tau_big) = match counting(phi, z) {
                Ok(n) => (n, n > c * neg_log_modulus(z)),
                // Logarithmic pole of N_φ; a single node carries no mass there.
                Err(NevanlinnaError::AtImageOfOrigin { .. }) => (T::zero(), true),
                Err(e) => return Err(e),
            };
            Ok([
                base,
                if tau_big { base } else { T::zero() },
                n * jac,
                neg_log_modulus(z) * jac,
            ])
        });
        let mut cols: [Vec<T>; 4] = Default::default();
        for t in terms {
            let t = t?;
            for (col, v) in cols.iter_mut().zip(t) {
                col.push(v);
            }
        }
        let [full, gc, ta, lg] = [0, 1, 2, 3].map(|i| q.integrate_values(&cols[i]));
        let (full, gc, ta, lg) = (full?, gc?, ta?, lg?);
        points.push(LueckingPoint {
            k,
            a: (a.re.as_f64(), a.im.as_f64()),
            i_full: full.as_f64(),
            i_gc: gc.as_f64(),
            i_tau: ta.as_f64(),
            i_log: lg.as_f64(),
        });
    }
    let min = |f: fn(&LueckingPoint) -> f64| points.iter().map(f).fold(f64::INFINITY, f64::min);
    Ok(LueckingReport {
        symbol: phi.tag(),
        c: c.as_f64(),
        min_gc_ratio: min(LueckingPoint::gc_ratio),
        min_tau_ratio: min(LueckingPoint::tau_ratio),
        min_tau_log_ratio: min(LueckingPoint::tau_log_ratio),
        points,
    })
}

/// Probe centers `(1 − 2^{−k}) e^{2πij/J}` from the configuration.
pub fn luecking_centers<T: Real>(cfg: &LueckingConfig) -> Vec<(usize, Complex<T>)> {
    let mut out = Vec::with_capacity(cfg.depth * cfg.rays);
    for k in 1..=cfg.depth {
        let r = T::one() - T::lit(0.5).powi(k as i32);
        for j in 0..cfg.rays {
            out.push((
                k,
                unit(T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(cfg.rays)) * r,
            ));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DirectProbeReport {
    pub p: f64,
    /// `min ‖f∘φ‖ᵖ / ‖f‖ᵖ` over the family.
    pub min_ratio: f64,
    pub argmin: String,
    pub ratios: Vec<(String, f64)>,
}

/// Monomials, kernels and two-valued outer functions.
pub fn default_probe_family<T: Real>(
    cfg: &DirectProbeConfig,
    p: HardyExponent<T>,
) -> Result<Vec<TestFunction<T>>, CriteriaError> {
    let mut family: Vec<TestFunction<T>> = (1..=cfg.monomials).map(TestFunction::monomial).collect();
    for k in 1..=cfg.kernel_depth {
        let r = T::one() - T::lit(0.5).powi(k as i32);
        for j in 0..cfg.kernel_rays {
            let lambda = unit(T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(cfg.kernel_rays)) * r;
            family.push(kernel(&KernelSpec::new(lambda, p)?)?);
        }
    }
    let q = CircleQuadrature::new(cfg.circle_nodes)?;
    let length = T::TAU() / T::from_usize_lossy(cfg.outer_arcs.max(2));
    let low = T::lit(0.5).powi(cfg.outer_level as i32);
    for j in 0..cfg.outer_arcs {
        let start = T::lit(cfg.outer_offset) + length * T::from_usize_lossy(j);
        family.push(outer_function(
            &BoundaryModulus::two_valued(start, length, T::one(), low),
            &q,
        )?);
    }
    Ok(family)
}

/// `min_f ‖f∘φ‖ᵖ / ‖f‖ᵖ`, an upper bound for the best lower constant of
/// the composition operator on the family.
pub fn direct_norm_ratio_probe<T: Real>(
    phi: Arc<dyn SelfMap<T>>,
    p: HardyExponent<T>,
    family: &[TestFunction<T>],
    q: &CircleQuadrature<T>,
    radii: &RadiusGrid<T>,
) -> Result<DirectProbeReport, CriteriaError> {
    if family.is_empty() {
        return Err(CriteriaError::Config("probe family is empty".into()));
    }
    let ratios: Vec<Result<(String, f64), CriteriaError>> = family
        .par_iter()
        .map(|f| {
            let den = norm_boundary(f, p, q, radii)?;
            if !(den > T::zero()) {
                return Err(CriteriaError::ZeroNorm(f.tag().to_owned()));
            }
            let num = norm_boundary(&TestFunction::compose(f, phi.clone()), p, q, radii)?;
            Ok((f.tag().to_owned(), (num / den).as_f64()))
        })
        .collect();
    let ratios = ratios.into_iter().collect::<Result<Vec<_>, _>>()?;
    let (argmin, min_ratio) = ratios
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .cloned()
        .expect("nonempty family");
    Ok(DirectProbeReport {
        p: p.get().as_f64(),
        min_ratio,
        argmin,
        ratios,
    })
}
