use num_complex::Complex;
use rayon::prelude::*;

use super::measure::EmpiricalBoundaryMeasure;
use super::observable::TestObservable;
use super::{CarlesonWindow, GeometryError};
use crate::nevanlinna::{counting, CountingTable};
use crate::numerics::DiskQuadrature;
use crate::scalar::unit;
use crate::symbols::SelfMap;
use crate::Real;

/// Both sides of `∫ g dm_φ = g(φ(0)) + ½ ∬ Δg N_φ dA`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Pb2Report {
    pub symbol: String,
    pub observable: String,
    pub samples: usize,
    /// `∫ g dm_φ` from the empirical measure.
    pub lhs: f64,
    pub rhs: f64,
    pub abs_gap: f64,
    /// `abs_gap / max(|lhs|, |rhs|, ∫|g| dm_φ)`; the last term keeps the ratio
    /// meaningful when both sides vanish.
    pub relative_gap: f64,
    /// Standard error of the sample mean of `g` over the atoms.
    pub mc_std_error: f64,
}

pub fn verify_pb2<T, S>(
    phi: &S,
    g: &TestObservable<T>,
    mu: &EmpiricalBoundaryMeasure<T>,
    q: &DiskQuadrature<T>,
) -> Result<Pb2Report, GeometryError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    let table = CountingTable::build(phi, q)?;
    verify_pb2_with(phi, g, mu, q, &table)
}

/// As [`verify_pb2`] with a prebuilt counting table for `φ` on `q`.
pub fn verify_pb2_with<T, S>(
    phi: &S,
    g: &TestObservable<T>,
    mu: &EmpiricalBoundaryMeasure<T>,
    q: &DiskQuadrature<T>,
    table: &CountingTable<T>,
) -> Result<Pb2Report, GeometryError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    let lhs = mu.integrate(|z| g.eval(z)).as_f64();
    let abs_mean = mu.integrate(|z| g.eval(z).abs()).as_f64();
    let second = mu.integrate(|z| g.eval(z).powi(2)).as_f64();
    let n = mu.samples() as f64;
    let variance = (second - lhs * lhs).max(0.0) * n / (n - 1.0).max(1.0);
    let area = table.integrate_against(|w| g.laplacian(w), q)?;
    let rhs = (g.eval(phi.at_origin()) + area / T::lit(2.0)).as_f64();
    let abs_gap = (lhs - rhs).abs();
    let scale = lhs.abs().max(rhs.abs()).max(abs_mean);
    Ok(Pb2Report {
        symbol: phi.tag(),
        observable: g.description().to_owned(),
        samples: mu.samples(),
        lhs,
        rhs,
        abs_gap,
        relative_gap: if scale > 0.0 { abs_gap / scale } else { 0.0 },
        mc_std_error: (variance / n).sqrt(),
    })
}

/// Tensor grid of probe points inside a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ProbeGrid {
    pub moduli: usize,
    pub angles: usize,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        Self { moduli: 32, angles: 32 }
    }
}

impl ProbeGrid {
    /// Moduli `1 − h + h(i+1)/M` capped at `1 − 1e−6`, angles spanning
    /// `[−πh, πh]` around `ζ`.
    pub fn points<T: Real>(&self, w: &CarlesonWindow<T>) -> Vec<Complex<T>> {
        let h = w.h();
        let cap = T::one() - T::lit(1e-6);
        let m = T::from_usize_lossy(self.moduli.max(1));
        let a = self.angles.max(2);
        let mut pts = Vec::with_capacity(self.moduli * a);
        for i in 0..self.moduli.max(1) {
            let r = (T::one() - h + h * T::from_usize_lossy(i + 1) / m).min(cap);
            for j in 0..a {
                let s = T::from_usize_lossy(j) / T::from_usize_lossy(a - 1);
                let alpha = T::PI() * h * (T::lit(2.0) * s - T::one());
                pts.push(w.zeta() * unit(alpha) * r);
            }
        }
        pts
    }
}

/// `sup_{W ∩ D} N_φ ≤ (100/c²) m_φ(W(ζ, (1+c)h))`, sampled.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Pb1Report {
    pub symbol: String,
    pub zeta: (f64, f64),
    pub h: f64,
    pub c: f64,
    /// Largest `N_φ` over the probe grid.
    pub lhs: f64,
    pub argmax: (f64, f64),
    /// `m_φ(W(ζ, (1+c)h))` from the empirical measure.
    pub window_mass: f64,
    pub rhs: f64,
    /// `rhs − lhs`; the inequality holds when this is nonnegative.
    pub margin: f64,
}

pub fn verify_pb1<T, S>(
    phi: &S,
    w: &CarlesonWindow<T>,
    c: T,
    mu: &EmpiricalBoundaryMeasure<T>,
    grid: &ProbeGrid,
) -> Result<Pb1Report, GeometryError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    if !(c > T::zero() && c < T::lit(0.125)) {
        return Err(GeometryError::Hypothesis(format!("c = {c} outside (0, 1/8)")));
    }
    let limit = (T::one() - phi.at_origin().norm()) / T::lit(8.0);
    if !(w.h() < limit) {
        return Err(GeometryError::Hypothesis(format!(
            "window depth h = {} must be below (1 − |φ(0)|)/8 = {limit}",
            w.h()
        )));
    }
    let values: Vec<Result<(T, Complex<T>), GeometryError>> = grid
        .points(w)
        .into_par_iter()
        .map(|z| Ok((counting(phi, z)?, z)))
        .collect();
    let mut lhs = T::zero();
    let mut argmax = w.zeta();
    for v in values {
        let (n, z) = v?;
        if n > lhs {
            lhs = n;
            argmax = z;
        }
    }
    let wider = w.scaled(T::one() + c)?;
    let mass = mu.measure_of_window(&wider);
    let rhs = T::lit(100.0) / (c * c) * mass;
    Ok(Pb1Report {
        symbol: phi.tag(),
        zeta: (w.zeta().re.as_f64(), w.zeta().im.as_f64()),
        h: w.h().as_f64(),
        c: c.as_f64(),
        lhs: lhs.as_f64(),
        argmax: (argmax.re.as_f64(), argmax.im.as_f64()),
        window_mass: mass.as_f64(),
        rhs: rhs.as_f64(),
        margin: (rhs - lhs).as_f64(),
    })
}
