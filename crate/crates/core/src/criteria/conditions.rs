use num_complex::Complex;
use rayon::prelude::*;

use super::config::{CriteriaConfig, KernelIntegral};
use super::{CriteriaError, Verdict};
use crate::geometry::{CarlesonWindow, DensityEstimate, EmpiricalBoundaryMeasure, PseudoDisk};
use crate::hardy::{kernel, HardyExponent, KernelRegime, KernelSpec, TestFunction, TestFunctionKind};
use crate::nevanlinna::{tau, NevanlinnaError};
use crate::numerics::{integrate_circle_adaptive, AdaptiveOptions, Region, SeededSampler};
use crate::scalar::{arg_positive, compensated_sum, unit};
use crate::symbols::SelfMap;
use crate::Real;

/// Stream tag for the sampler of the `i`-th pseudo-disk in condition (iii).
const GC_STREAM: u64 = 2 << 24;

/// `∫ |K_λ|ᵖ dm_φ` at one grid point.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct KernelPoint {
    /// `|λ| = 1 − 2^{−k}`.
    pub k: usize,
    pub ray: usize,
    pub lambda: (f64, f64),
    pub integral: f64,
    /// Quadrature error estimate; zero for the empirical sum.
    pub error: f64,
}

/// Fractions of `D_η(a)` covered by `G_c`, one per configured `c`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GcPoint {
    /// `|a| = 1 − 2^{−k}`; `k = 0` marks `a = 0`.
    pub k: usize,
    pub a: (f64, f64),
    pub eta: f64,
    pub fractions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WindowPoint {
    pub zeta_angle: f64,
    pub h: f64,
    pub mass: f64,
    /// `m_φ(W(ζ, h)) / h`.
    pub ratio: f64,
}

fn decay_rate(p: f64) -> f64 {
    if p > 1.0 {
        p - 1.0
    } else {
        p
    }
}

/// λ-grid depth for exponent `p`.
///
/// On compacta `|K_λ|ᵖ` decays like `(1 − |λ|)^e` with `e = p − 1` for the
/// normalized kernel and `e = p` for the explicit one, so slow decay gets a
/// proportionally deeper grid. Capped at `base + 4` (normalized) and `2·base`
/// (explicit), where the kernels stay resolvable in double precision.
pub fn kernel_depth_for(p: f64, base: usize) -> usize {
    let want = (base as f64 / decay_rate(p).min(1.0)).ceil() as usize;
    let cap = if p > 1.0 { base + 4 } else { 2 * base };
    want.clamp(1, cap)
}

/// `Σ_atoms |f(w)|ᵖ · weight`.
pub fn kernel_integral_empirical<T: Real>(mu: &EmpiricalBoundaryMeasure<T>, f: &TestFunction<T>, p: T) -> T {
    compensated_sum(mu.atoms().iter().map(|a| f.abs_pow(a.point, p) * a.weight))
}

/// `∫_T |f(φ(e^{iθ}))|ᵖ dm(θ)` by adaptive quadrature.
///
/// For kernels the angles where `φ(e^{iθ})` meets the direction of `λ` are
/// inserted as breakpoints; a nearby level point off the circle still marks
/// where the integrand peaks.
pub fn kernel_integral_pushforward<T, S>(
    phi: &S,
    f: &TestFunction<T>,
    p: T,
    opts: &AdaptiveOptions,
) -> Result<(T, T), CriteriaError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    let mut breaks = Vec::new();
    if let TestFunctionKind::Kernel { lambda, .. } = f.kind() {
        if lambda.norm() > T::zero() {
            let target = lambda / lambda.norm();
            for z in phi.level_points(target)? {
                let r = z.norm();
                if r > T::lit(0.5) && r < T::lit(1.5) {
                    breaks.push(arg_positive(z));
                }
            }
        }
    }
    let r = integrate_circle_adaptive(
        |theta| f.abs_pow(phi.boundary_pushforward_point(theta), p),
        &breaks,
        opts,
    )?;
    Ok((r.value, r.error))
}

fn grid_lambda<T: Real>(k: usize, ray: usize, rays: usize) -> Complex<T> {
    let r = T::one() - T::lit(0.5).powi(k as i32);
    unit(T::TAU() * T::from_usize_lossy(ray) / T::from_usize_lossy(rays)) * r
}

/// Kernel test: the minimum of `∫ |K_λ|ᵖ dm_φ` over a λ-grid approaching
/// the circle along equally spaced rays.
///
/// The empirical measure is only consulted in [`KernelIntegral::Empirical`]
/// mode.
pub fn condition_i_kernel_test<T, S>(
    phi: &S,
    p: HardyExponent<T>,
    mu: Option<&EmpiricalBoundaryMeasure<T>>,
    config: &CriteriaConfig,
) -> Result<(Verdict, Vec<KernelPoint>), CriteriaError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    let pp = p.get();
    let depth = config
        .kernel_depth
        .unwrap_or_else(|| kernel_depth_for(pp.as_f64(), config.kernel_depth_base));
    let rays = config.kernel_rays;
    let mu = match (config.kernel_integral, mu) {
        (KernelIntegral::Empirical, None) => {
            return Err(CriteriaError::Config(
                "empirical kernel integrals need a measure".into(),
            ))
        }
        (KernelIntegral::Empirical, Some(m)) => Some(m),
        (KernelIntegral::Pushforward, _) => None,
    };

    let mut points = Vec::with_capacity(depth * rays);
    for k in 1..=depth {
        // |K_λ| depends on λ through |λ| and the rotation only, so every ray
        // shares the normalization computed on the positive axis.
        let axis = kernel(&KernelSpec::new(grid_lambda::<T>(k, 0, 1), p)?)?;
        let (scale, exponent) = match axis.kind() {
            TestFunctionKind::Kernel { scale, exponent, .. } => (*scale, *exponent),
            _ => unreachable!("kernel() builds kernels"),
        };
        let row: Vec<Result<KernelPoint, CriteriaError>> = (0..rays)
            .into_par_iter()
            .map(|j| {
                let lambda = grid_lambda::<T>(k, j, rays);
                let f = TestFunction::raw_kernel(lambda, scale, exponent)?;
                let (integral, error) = match mu {
                    Some(m) => (kernel_integral_empirical(m, &f, pp), T::zero()),
                    None => kernel_integral_pushforward(phi, &f, pp, &config.kernel_adaptive)?,
                };
                Ok(KernelPoint {
                    k,
                    ray: j,
                    lambda: (lambda.re.as_f64(), lambda.im.as_f64()),
                    integral: integral.as_f64(),
                    error: error.as_f64(),
                })
            })
            .collect();
        for r in row {
            points.push(r?);
        }
    }
    let (worst, estimate) = points
        .iter()
        .map(|pt| (pt, pt.integral))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty λ-grid");
    let regime = if pp > T::one() {
        KernelRegime::Normalized
    } else {
        KernelRegime::Explicit
    };
    let note = format!(
        "{regime:?} kernels, depth {depth} x {rays} rays; min at k = {}, ray {}",
        worst.k, worst.ray
    );
    Ok((
        Verdict::from_estimate(estimate, config.eps_i, config.inconclusive_band, note),
        points,
    ))
}

/// Density test: the essential infimum of the boundary density of `m_φ`.
pub fn condition_ii_density_test<T: Real>(
    mu: &EmpiricalBoundaryMeasure<T>,
    config: &CriteriaConfig,
) -> Result<(Verdict, DensityEstimate), CriteriaError> {
    let d = DensityEstimate::from_measure(mu, config.density_bins, T::lit(config.circle_tol))?;
    let note = format!(
        "{} bins, {} samples, mass on circle {:.6}, ess_inf std error {:.2e}",
        d.bins, d.samples, d.mass_on_circle, d.ess_inf_error
    );
    Ok((
        Verdict::from_estimate(d.ess_inf, config.eps_ii, config.inconclusive_band, note),
        d,
    ))
}

/// `τ_φ` at a Monte Carlo sample. At `φ(0)` the counting function has a
/// logarithmic pole, so `τ` is infinite there.
fn sample_tau<T, S>(phi: &S, z: Complex<T>) -> Result<T, NevanlinnaError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    match tau(phi, z) {
        Err(NevanlinnaError::AtImageOfOrigin { .. }) => Ok(T::infinity()),
        Err(NevanlinnaError::AtOrigin) => {
            // z = 0 off the image of 0: N_φ(0) is finite and log(1/|z|) is not.
            Ok(T::zero())
        }
        other => other,
    }
}

/// The thresholds `c = 2^{−j}`, `j = 0..=J`.
pub(crate) fn gc_thresholds(config: &CriteriaConfig) -> Vec<f64> {
    (0..=config.gc_c_exponents).map(|j| 0.5f64.powi(j as i32)).collect()
}

/// `G_c` test: `max_{η, c} min_a A(G_c ∩ D_η(a)) / A(D_η(a))`.
pub fn condition_iii_gc_test<T, S>(phi: &S, config: &CriteriaConfig) -> Result<(Verdict, Vec<GcPoint>), CriteriaError>
where
    T: Real,
    S: SelfMap<T> + ?Sized,
{
    let cs = gc_thresholds(config);
    let mut centers: Vec<(usize, Complex<T>)> = vec![(0, Complex::new(T::zero(), T::zero()))];
    for k in 1..=config.gc_depth {
        for j in 0..config.gc_angles {
            centers.push((k, grid_lambda(k, j, config.gc_angles)));
        }
    }
    let tasks: Vec<(f64, usize, Complex<T>)> = config
        .gc_etas
        .iter()
        .flat_map(|&eta| centers.iter().map(move |&(k, a)| (eta, k, a)))
        .collect();
    let n = config.gc_samples;
    let results: Vec<Result<GcPoint, CriteriaError>> = tasks
        .par_iter()
        .enumerate()
        .map(|(i, &(eta, k, a))| {
            let disk = PseudoDisk::new(a, T::lit(eta))?;
            let mut sampler = SeededSampler::with_stream(config.seed, GC_STREAM | i as u64);
            let mut hits = vec![0usize; cs.len()];
            for _ in 0..n {
                let t = sample_tau(phi, disk.sample_uniform(&mut sampler))?.as_f64();
                for (h, &c) in hits.iter_mut().zip(&cs) {
                    if t > c {
                        *h += 1;
                    }
                }
            }
            Ok(GcPoint {
                k,
                a: (a.re.as_f64(), a.im.as_f64()),
                eta,
                fractions: hits.iter().map(|&h| h as f64 / n as f64).collect(),
            })
        })
        .collect();
    let points = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for &eta in &config.gc_etas {
        for (ci, &c) in cs.iter().enumerate() {
            let worst = points
                .iter()
                .filter(|pt| pt.eta == eta)
                .map(|pt| pt.fractions[ci])
                .fold(f64::INFINITY, f64::min);
            if worst > best.0 {
                best = (worst, eta, c);
            }
        }
    }
    let note = format!(
        "best at eta = {}, c = {}; {} centers, {n} samples each",
        best.1,
        best.2,
        centers.len()
    );
    Ok((
        Verdict::from_estimate(best.0, config.delta_iii, config.inconclusive_band, note),
        points,
    ))
}

/// Window test: `min m_φ(W(ζ, h)) / h` over the window grid.
pub fn condition_window_test<T: Real>(
    mu: &EmpiricalBoundaryMeasure<T>,
    config: &CriteriaConfig,
) -> Result<(Verdict, Vec<WindowPoint>), CriteriaError> {
    let mut points = Vec::with_capacity(config.window_angles * config.window_depth);
    for j in 0..config.window_angles {
        let theta = T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(config.window_angles);
        for k in 1..=config.window_depth {
            let h = T::lit(0.5).powi(k as i32);
            let w = CarlesonWindow::at_angle(theta, h)?;
            let mass = mu.measure_of_window(&w);
            points.push(WindowPoint {
                zeta_angle: theta.as_f64(),
                h: h.as_f64(),
                mass: mass.as_f64(),
                ratio: (mass / h).as_f64(),
            });
        }
    }
    let worst = points
        .iter()
        .min_by(|a, b| a.ratio.total_cmp(&b.ratio))
        .expect("nonempty window grid");
    let note = format!(
        "{} windows, min at angle {:.4}, h = {}",
        points.len(),
        worst.zeta_angle,
        worst.h
    );
    Ok((
        Verdict::from_estimate(worst.ratio, config.eps_window, config.inconclusive_band, note),
        points,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::VerdictState;
    use crate::geometry::pullback_measure;
    use crate::symbols::Symbol;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn hp(p: f64) -> HardyExponent<f64> {
        HardyExponent::new(p).unwrap()
    }

    fn quick() -> CriteriaConfig {
        CriteriaConfig {
            samples: 200_000,
            gc_samples: 512,
            ..CriteriaConfig::default()
        }
    }

    #[test]
    fn depth_schedule() {
        assert_eq!(kernel_depth_for(2.0, 12), 12);
        assert_eq!(kernel_depth_for(4.0, 12), 12);
        assert_eq!(kernel_depth_for(1.0, 12), 12);
        assert_eq!(kernel_depth_for(0.5, 12), 24);
        assert_eq!(kernel_depth_for(1.5, 12), 16);
        assert_eq!(kernel_depth_for(0.1, 12), 24);
    }

    #[test]
    fn kernel_test_examples() {
        let cfg = quick();
        let id = Symbol::<f64>::identity();
        let (v, pts) = condition_i_kernel_test(&id, hp(2.0), None, &cfg).unwrap();
        assert_eq!(v.state, VerdictState::Closed);
        assert!(pts.iter().all(|pt| (pt.integral - 1.0).abs() < 1e-6), "{v:?}");

        let shifted = Symbol::affine(0.5, c(0.5, 0.0)).unwrap();
        let (v, pts) = condition_i_kernel_test(&shifted, hp(2.0), None, &cfg).unwrap();
        assert_eq!(v.state, VerdictState::NotClosed, "{v:?}");
        let toward_minus_one = pts.iter().filter(|pt| pt.ray == 8).map(|pt| pt.integral);
        let tail: Vec<f64> = toward_minus_one.collect();
        assert!(tail.windows(2).all(|w| w[1] < w[0]));

        let half = Symbol::affine(0.5, c(0.0, 0.0)).unwrap();
        let (v, _) = condition_i_kernel_test(&half, hp(2.0), None, &cfg).unwrap();
        assert_eq!(v.state, VerdictState::NotClosed);
    }

    #[test]
    fn empirical_mode_agrees_at_shallow_depth() {
        let cfg = CriteriaConfig {
            kernel_integral: KernelIntegral::Empirical,
            kernel_depth: Some(4),
            ..quick()
        };
        let sq = Symbol::<f64>::power(2).unwrap();
        let mu = pullback_measure(&sq, 200_000, &SeededSampler::new(3)).unwrap();
        let (_, emp) = condition_i_kernel_test(&sq, hp(2.0), Some(&mu), &cfg).unwrap();
        let cfg = CriteriaConfig {
            kernel_integral: KernelIntegral::Pushforward,
            ..cfg
        };
        let (_, exact) = condition_i_kernel_test(&sq, hp(2.0), None, &cfg).unwrap();
        for (e, x) in emp.iter().zip(&exact) {
            assert!((e.integral - x.integral).abs() < 0.02 * x.integral, "{e:?} {x:?}");
        }
        assert!(condition_i_kernel_test(
            &sq,
            hp(2.0),
            None,
            &CriteriaConfig {
                kernel_integral: KernelIntegral::Empirical,
                ..quick()
            }
        )
        .is_err());
    }

    #[test]
    fn density_test_examples() {
        let cfg = quick();
        let s = SeededSampler::new(1);
        let sq = Symbol::<f64>::power(2).unwrap();
        let (v, _) = condition_ii_density_test(&pullback_measure(&sq, cfg.samples, &s).unwrap(), &cfg).unwrap();
        assert_eq!(v.state, VerdictState::Closed);
        assert!((v.estimate - 1.0).abs() < 0.05);

        let psi = Symbol::moebius(c(0.5, 0.0)).unwrap();
        let (v, _) = condition_ii_density_test(&pullback_measure(&psi, cfg.samples, &s).unwrap(), &cfg).unwrap();
        assert_eq!(v.state, VerdictState::Closed);
        assert!((v.estimate - 1.0 / 3.0).abs() < 0.03, "{v:?}");

        let shifted = Symbol::affine(0.5, c(0.5, 0.0)).unwrap();
        let (v, _) = condition_ii_density_test(&pullback_measure(&shifted, cfg.samples, &s).unwrap(), &cfg).unwrap();
        assert_eq!(v.state, VerdictState::NotClosed);
        assert_eq!(v.estimate, 0.0);
    }

    #[test]
    fn gc_test_examples() {
        let cfg = quick();
        for sym in [Symbol::<f64>::identity(), Symbol::power(2).unwrap()] {
            let (v, pts) = condition_iii_gc_test(&sym, &cfg).unwrap();
            assert_eq!(v.state, VerdictState::Closed);
            // c = 1/2 is the second threshold; τ ≡ 1 puts every sample in G_c.
            assert!(pts.iter().all(|pt| pt.fractions[1] == 1.0));
        }
        let shrink = Symbol::affine(0.8, c(0.0, 0.0)).unwrap();
        let (v, pts) = condition_iii_gc_test(&shrink, &cfg).unwrap();
        assert_eq!(v.state, VerdictState::NotClosed);
        for pt in pts.iter().filter(|pt| pt.k >= 5) {
            assert!(pt.fractions.iter().all(|&f| f == 0.0), "{pt:?}");
        }
    }

    #[test]
    fn window_test_examples() {
        let cfg = quick();
        let s = SeededSampler::new(2);
        for sym in [Symbol::<f64>::identity(), Symbol::power(3).unwrap()] {
            let mu = pullback_measure(&sym, 1_000_000, &s).unwrap();
            let (v, pts) = condition_window_test(&mu, &cfg).unwrap();
            assert_eq!(v.state, VerdictState::Closed);
            assert!(pts.iter().all(|pt| (pt.ratio - 1.0).abs() < 0.15), "{v:?}");
        }
        let shifted = Symbol::affine(0.5, c(0.5, 0.0)).unwrap();
        let mu = pullback_measure(&shifted, cfg.samples, &s).unwrap();
        let (v, pts) = condition_window_test(&mu, &cfg).unwrap();
        assert_eq!(v.state, VerdictState::NotClosed);
        let at_minus_one = pts
            .iter()
            .filter(|pt| (pt.zeta_angle - std::f64::consts::PI).abs() < 1e-12 && pt.h < 0.1);
        assert!(at_minus_one.clone().count() > 0);
        assert!(at_minus_one.into_iter().all(|pt| pt.ratio == 0.0));
    }
}
