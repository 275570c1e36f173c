use std::io::{self, Write};

use num_complex::Complex;
use rayon::prelude::*;

use super::{CarlesonWindow, GeometryError};
use crate::numerics::SeededSampler;
use crate::scalar::{arg_positive, compensated_sum, unit};
use crate::symbols::SelfMap;
use crate::Real;

/// Strata per parallel task; each task draws from its own sub-stream.
const STRATA_PER_TASK: usize = 1 << 16;

/// One sample of the pullback measure: `φ(e^{iθ})` with its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<T> {
    pub theta: T,
    pub point: Complex<T>,
    pub weight: T,
}

/// Empirical version of `m_φ(E) = m(φ⁻¹(E) ∩ T)`: equal-weight atoms at the
/// boundary values of `φ` over stratified uniform angles.
///
/// Atoms are stored in angle order; a secondary index sorted by the argument
/// of the atom makes window queries a range scan.
#[derive(Debug, Clone)]
pub struct EmpiricalBoundaryMeasure<T> {
    atoms: Vec<Atom<T>>,
    by_arg: Vec<u32>,
    sorted_args: Vec<T>,
    tag: String,
    seed: u64,
}

/// Samples `m_φ` with `n` stratified angles `θⱼ = 2π(j + Uⱼ)/n`.
///
/// Strata are processed in parallel blocks with sub-streams of `sampler`
/// derived from the block index, so the atoms depend only on the seed.
pub fn pullback_measure<T, S>(
    phi: &S,
    n: usize,
    sampler: &SeededSampler,
) -> Result<EmpiricalBoundaryMeasure<T>, GeometryError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    if n == 0 || n > u32::MAX as usize {
        return Err(GeometryError::InvalidBins(format!("sample count {n} out of range")));
    }
    let weight = T::one() / T::from_usize_lossy(n);
    let tasks = n.div_ceil(STRATA_PER_TASK);
    let base = sampler.stream() << 24;
    let atoms: Vec<Atom<T>> = (0..tasks)
        .into_par_iter()
        .flat_map_iter(|task| {
            let mut s = sampler.derive(base | (task as u64 + 1));
            let lo = task * STRATA_PER_TASK;
            let hi = (lo + STRATA_PER_TASK).min(n);
            (lo..hi)
                .map(|j| {
                    let theta = T::TAU() * (T::from_usize_lossy(j) + s.uniform::<T>()) * weight;
                    Atom {
                        theta,
                        point: phi.eval(unit(theta)),
                        weight,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    if let Some(a) = atoms
        .iter()
        .find(|a| !(a.point.re.is_finite() && a.point.im.is_finite()))
    {
        return Err(crate::numerics::NumericsError::Degenerate(format!(
            "boundary value at θ = {} is not finite",
            a.theta
        ))
        .into());
    }
    Ok(EmpiricalBoundaryMeasure::from_atoms(atoms, phi.tag(), sampler.seed()))
}

impl<T: Real> EmpiricalBoundaryMeasure<T> {
    /// Builds the measure from explicit atoms (kept in the given order).
    pub fn from_atoms(atoms: Vec<Atom<T>>, tag: String, seed: u64) -> Self {
        let args: Vec<T> = atoms.iter().map(|a| arg_positive(a.point)).collect();
        let mut by_arg: Vec<u32> = (0..atoms.len() as u32).collect();
        by_arg.sort_by(|&i, &j| {
            args[i as usize]
                .as_f64()
                .total_cmp(&args[j as usize].as_f64())
                .then(i.cmp(&j))
        });
        let sorted_args = by_arg.iter().map(|&i| args[i as usize]).collect();
        Self {
            atoms,
            by_arg,
            sorted_args,
            tag,
            seed,
        }
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn samples(&self) -> usize {
        self.atoms.len()
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn total_mass(&self) -> T {
        compensated_sum(self.atoms.iter().map(|a| a.weight))
    }

    /// `∫ g dμ`.
    pub fn integrate<G: Fn(Complex<T>) -> T>(&self, g: G) -> T {
        compensated_sum(self.atoms.iter().map(|a| g(a.point) * a.weight))
    }

    /// Mass of atoms with `|z| ≥ 1 − tol`.
    pub fn mass_on_circle(&self, tol: T) -> T {
        compensated_sum(
            self.atoms
                .iter()
                .filter(|a| a.point.norm() >= T::one() - tol)
                .map(|a| a.weight),
        )
    }

    /// `μ(W)`.
    pub fn measure_of_window(&self, w: &CarlesonWindow<T>) -> T {
        let center = arg_positive(w.zeta());
        let half = T::PI() * w.h() + T::lit(1e-12);
        let tau = T::TAU();
        let (lo, hi) = (center - half, center + half);
        let mut ranges = vec![(lo.max(T::zero()), hi.min(tau))];
        if lo < T::zero() {
            ranges.push((lo + tau, tau));
        }
        if hi > tau {
            ranges.push((T::zero(), hi - tau));
        }
        compensated_sum(ranges.into_iter().flat_map(|(a, b)| {
            let start = self.sorted_args.partition_point(|&x| x < a);
            let end = self.sorted_args.partition_point(|&x| x <= b);
            self.by_arg[start..end]
                .iter()
                .map(|&i| &self.atoms[i as usize])
                .filter(|atom| w.contains(atom.point))
                .map(|atom| atom.weight)
        }))
    }

    /// Columnar text dump: `angle re im weight`, one atom per line.
    pub fn write_columns<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# angle re im weight")?;
        for a in &self.atoms {
            writeln!(out, "{} {} {} {}", a.theta, a.point.re, a.point.im, a.weight)?;
        }
        Ok(())
    }
}

/// Histogram estimate of `dν_φ/dm` on `B` equal arcs.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DensityEstimate {
    pub bins: usize,
    pub samples: usize,
    pub circle_tol: f64,
    /// Mass in bin `k` divided by the bin length `1/B`.
    pub densities: Vec<f64>,
    /// Binomial standard error of each density.
    pub errors: Vec<f64>,
    pub ess_inf: f64,
    pub ess_inf_error: f64,
    pub max_density: f64,
    pub mass_on_circle: f64,
}

impl DensityEstimate {
    pub fn from_measure<T: Real>(
        mu: &EmpiricalBoundaryMeasure<T>,
        bins: usize,
        circle_tol: T,
    ) -> Result<Self, GeometryError> {
        if bins < 8 {
            return Err(GeometryError::InvalidBins(format!("need at least 8 bins, got {bins}")));
        }
        let n = mu.samples();
        let mut counts = vec![0usize; bins];
        let mut on_circle = 0usize;
        for a in mu.atoms() {
            if a.point.norm() >= T::one() - circle_tol {
                let t = arg_positive(a.point).as_f64() / std::f64::consts::TAU;
                counts[((t * bins as f64) as usize).min(bins - 1)] += 1;
                on_circle += 1;
            }
        }
        let b = bins as f64;
        let nf = n as f64;
        let densities: Vec<f64> = counts.iter().map(|&k| k as f64 * b / nf).collect();
        let errors: Vec<f64> = counts
            .iter()
            .map(|&k| {
                let p = k as f64 / nf;
                (p * (1.0 - p) / nf).sqrt() * b
            })
            .collect();
        let (argmin, &ess_inf) = densities
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .expect("bins ≥ 8");
        Ok(Self {
            bins,
            samples: n,
            circle_tol: circle_tol.as_f64(),
            ess_inf,
            ess_inf_error: errors[argmin],
            max_density: densities.iter().copied().fold(0.0, f64::max),
            densities,
            errors,
            mass_on_circle: on_circle as f64 / nf,
        })
    }

    /// `Σ density · (1/B)`.
    pub fn integrated_mass(&self) -> f64 {
        self.densities.iter().sum::<f64>() / self.bins as f64
    }
}

/// Samples `m_φ` and histograms the part on the circle.
pub fn rn_density<T, S>(
    phi: &S,
    bins: usize,
    n: usize,
    sampler: &SeededSampler,
    circle_tol: T,
) -> Result<DensityEstimate, GeometryError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    let mu = pullback_measure(phi, n, sampler)?;
    DensityEstimate::from_measure(&mu, bins, circle_tol)
}
