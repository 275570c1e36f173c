use std::sync::Arc;

use super::conditions::{
    condition_i_kernel_test, condition_ii_density_test, condition_iii_gc_test, condition_window_test, gc_thresholds,
    GcPoint, KernelPoint, WindowPoint,
};
use super::config::CriteriaConfig;
use super::probes::{
    default_probe_family, direct_norm_ratio_probe, luecking_centers, luecking_probe, DirectProbeReport, LueckingReport,
};
use super::{CriteriaError, Verdict, VerdictState};
use crate::geometry::{pullback_measure, DensityEstimate};
use crate::hardy::{HardyExponent, RadiusGrid};
use crate::numerics::{CircleQuadrature, DiskQuadrature, SeededSampler};
use crate::symbols::SelfMap;
use crate::Real;

/// Version tag written into every serialized report.
pub const REPORT_SCHEMA: &str = "closed-range/report/v1";

/// Sampler stream of the pullback measure.
const MEASURE_STREAM: u64 = 1;

/// Raw data behind the verdicts, for plotting.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Curves {
    pub kernel: Vec<KernelPoint>,
    pub density: Option<DensityEstimate>,
    /// The `c` values indexing [`GcPoint::fractions`].
    pub gc_thresholds: Vec<f64>,
    pub gc: Vec<GcPoint>,
    pub window: Vec<WindowPoint>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ClosedRangeReport {
    pub schema: String,
    pub symbol: String,
    pub p: f64,
    pub verdict_i: Verdict,
    pub verdict_ii: Verdict,
    pub verdict_iii: Verdict,
    pub verdict_window: Verdict,
    /// All non-inconclusive verdicts agree.
    pub consistent: bool,
    /// The common confident verdict, or `Inconclusive`.
    pub overall: VerdictState,
    pub curves: Curves,
    pub luecking: Option<LueckingReport>,
    pub direct_probe: Option<DirectProbeReport>,
    /// Sub-test failures; each one leaves its verdict `Inconclusive`.
    pub errors: Vec<String>,
    pub config: CriteriaConfig,
}

impl ClosedRangeReport {
    pub fn verdicts(&self) -> [&Verdict; 4] {
        [
            &self.verdict_i,
            &self.verdict_ii,
            &self.verdict_iii,
            &self.verdict_window,
        ]
    }

    /// Verdict codes in criterion order, e.g. `"CCCC"`.
    pub fn codes(&self) -> String {
        self.verdicts().iter().map(|v| v.state.code()).collect()
    }
}

fn consensus(verdicts: [&Verdict; 4]) -> (bool, VerdictState) {
    let mut confident = verdicts
        .iter()
        .map(|v| v.state)
        .filter(|&s| s != VerdictState::Inconclusive);
    match confident.next() {
        None => (true, VerdictState::Inconclusive),
        Some(first) => {
            if confident.all(|s| s == first) {
                (true, first)
            } else {
                (false, VerdictState::Inconclusive)
            }
        }
    }
}

fn record<V>(errors: &mut Vec<String>, what: &str, r: Result<V, CriteriaError>) -> Result<V, Verdict> {
    r.map_err(|e| {
        errors.push(format!("{what}: {e}"));
        Verdict::failed(&e)
    })
}

/// One report per exponent in `ps`; the exponent-free criteria are evaluated
/// once and shared.
///
/// Only an invalid configuration or exponent is fatal; every other failure
/// is recorded in the report.
pub fn analyze_symbol<T: Real>(
    phi: Arc<dyn SelfMap<T>>,
    ps: &[T],
    config: &CriteriaConfig,
) -> Result<Vec<ClosedRangeReport>, CriteriaError> {
    config.validate()?;
    let exponents = ps
        .iter()
        .map(|&p| HardyExponent::new(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut errors = Vec::new();

    let mu = record(
        &mut errors,
        "pullback measure",
        pullback_measure(
            &*phi,
            config.samples,
            &SeededSampler::with_stream(config.seed, MEASURE_STREAM),
        )
        .map_err(CriteriaError::from),
    )
    .ok();

    let (verdict_ii, density) = match &mu {
        Some(m) => match record(&mut errors, "condition (ii)", condition_ii_density_test(m, config)) {
            Ok((v, d)) => (v, Some(d)),
            Err(v) => (v, None),
        },
        None => (Verdict::failed(&CriteriaError::Config("no measure".into())), None),
    };
    let (verdict_window, window) = match &mu {
        Some(m) => match record(&mut errors, "window condition", condition_window_test(m, config)) {
            Ok(x) => x,
            Err(v) => (v, Vec::new()),
        },
        None => (Verdict::failed(&CriteriaError::Config("no measure".into())), Vec::new()),
    };
    let (verdict_iii, gc) = match record(&mut errors, "condition (iii)", condition_iii_gc_test(&*phi, config)) {
        Ok(x) => x,
        Err(v) => (v, Vec::new()),
    };
    let luecking = if config.luecking.enabled {
        let l = &config.luecking;
        let run = DiskQuadrature::new(l.radial_nodes, l.angular_nodes, 2)
            .map_err(CriteriaError::from)
            .and_then(|q| luecking_probe(&*phi, T::lit(l.c), &luecking_centers(l), &q));
        record(&mut errors, "luecking probe", run).ok()
    } else {
        None
    };

    let mut reports = Vec::with_capacity(exponents.len());
    for p in exponents {
        let mut errors = errors.clone();
        let (verdict_i, kernel) = match record(
            &mut errors,
            "condition (i)",
            condition_i_kernel_test(&*phi, p, mu.as_ref(), config),
        ) {
            Ok(x) => x,
            Err(v) => (v, Vec::new()),
        };
        let direct_probe = if config.direct_probe.enabled {
            let d = &config.direct_probe;
            let run = CircleQuadrature::new(d.circle_nodes)
                .map_err(CriteriaError::from)
                .and_then(|q| {
                    let family = default_probe_family(d, p)?;
                    direct_norm_ratio_probe(phi.clone(), p, &family, &q, &RadiusGrid::standard())
                });
            record(&mut errors, "direct probe", run).ok()
        } else {
            None
        };
        let verdicts = [&verdict_i, &verdict_ii, &verdict_iii, &verdict_window];
        let (consistent, overall) = consensus(verdicts);
        reports.push(ClosedRangeReport {
            schema: REPORT_SCHEMA.to_owned(),
            symbol: phi.tag(),
            p: p.get().as_f64(),
            verdict_i,
            verdict_ii: verdict_ii.clone(),
            verdict_iii: verdict_iii.clone(),
            verdict_window: verdict_window.clone(),
            consistent,
            overall,
            curves: Curves {
                kernel,
                density: density.clone(),
                gc_thresholds: gc_thresholds(config),
                gc: gc.clone(),
                window: window.clone(),
            },
            luecking: luecking.clone(),
            direct_probe,
            errors,
            config: config.clone(),
        });
    }
    Ok(reports)
}

/// Report for a single exponent.
pub fn analyze<T: Real>(
    phi: Arc<dyn SelfMap<T>>,
    p: T,
    config: &CriteriaConfig,
) -> Result<ClosedRangeReport, CriteriaError> {
    Ok(analyze_symbol(phi, &[p], config)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::Symbol;
    use num_complex::Complex;

    fn quick() -> CriteriaConfig {
        CriteriaConfig {
            samples: 200_000,
            gc_samples: 512,
            ..CriteriaConfig::default()
        }
    }

    fn v(state: VerdictState) -> Verdict {
        Verdict {
            state,
            estimate: 0.0,
            threshold: 0.0,
            not_closed_threshold: 0.0,
            note: String::new(),
        }
    }

    #[test]
    fn consensus_rules() {
        use VerdictState::*;
        let (c, n, i) = (v(Closed), v(NotClosed), v(Inconclusive));
        assert_eq!(consensus([&c, &c, &i, &c]), (true, Closed));
        assert_eq!(consensus([&c, &n, &c, &c]), (false, Inconclusive));
        assert_eq!(consensus([&i, &i, &i, &i]), (true, Inconclusive));
    }

    #[test]
    fn analyze_examples() {
        let cfg = quick();
        let id: Arc<dyn SelfMap<f64>> = Arc::new(Symbol::identity());
        let r = analyze(id, 2.0, &cfg).unwrap();
        assert_eq!(r.codes(), "CCCC", "{:?}", r.errors);
        assert!(r.consistent && r.errors.is_empty());

        let half: Arc<dyn SelfMap<f64>> = Arc::new(Symbol::affine(0.5, Complex::new(0.0, 0.0)).unwrap());
        let r = analyze(half, 2.0, &cfg).unwrap();
        assert_eq!(r.codes(), "NNNN");
        assert_eq!(r.overall, VerdictState::NotClosed);

        let psi = Symbol::moebius(Complex::new(0.5, 0.0)).unwrap();
        let inner: Arc<dyn SelfMap<f64>> = Arc::new(Symbol::compose(&psi, &Symbol::power(2).unwrap()).unwrap());
        let r = analyze(inner, 2.0, &cfg).unwrap();
        assert_eq!(r.codes(), "CCCC");
    }

    #[test]
    fn invalid_inputs_are_fatal() {
        let id: Arc<dyn SelfMap<f64>> = Arc::new(Symbol::identity());
        assert!(analyze(id.clone(), -1.0, &quick()).is_err());
        let bad = CriteriaConfig { samples: 0, ..quick() };
        assert!(analyze(id, 2.0, &bad).is_err());
    }
}
