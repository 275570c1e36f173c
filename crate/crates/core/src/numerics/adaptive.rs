use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::NumericsError;
use crate::Real;

// 15-point Kronrod extension of the 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    /// Uniform panels laid down before any breakpoints are inserted.
    pub initial_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_panels: 20_000,
            initial_panels: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveResult<T> {
    pub value: T,
    pub error: T,
    pub panels: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .as_f64()
            .total_cmp(&other.error.as_f64())
            .then_with(|| other.a.as_f64().total_cmp(&self.a.as_f64()))
    }
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * T::lit(x);
        let s = f(mid - dx) + f(mid + dx);
        kronrod = kronrod + s * T::lit(wk);
        if i % 2 == 1 {
            gauss = gauss + s * T::lit(WG[i / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// `breakpoints` inside the interval become panel edges from the start;
/// place them at known peaks so bisection can home in on them.
pub fn integrate_adaptive<T, F>(
    f: F,
    a: T,
    b: T,
    breakpoints: &[T],
    opts: &AdaptiveOptions,
) -> Result<AdaptiveResult<T>, NumericsError>
where
    T: Real,
    F: Fn(T) -> T,
{
    if !(a < b) {
        return Err(NumericsError::Degenerate("empty integration interval".into()));
    }
    let mut edges: Vec<T> = (0..=opts.initial_panels.max(1))
        .map(|i| a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(opts.initial_panels.max(1)))
        .collect();
    edges.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    edges.sort_by(|x, y| x.as_f64().total_cmp(&y.as_f64()));
    edges.dedup_by(|x, y| (*x - *y).abs() <= T::epsilon() * (b - a));

    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = T::zero();
    for w in edges.windows(2) {
        let (v, e) = gk15(&f, w[0], w[1]);
        total = total + v;
        total_err = total_err + e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }
    let check = |t: T| {
        if t.is_finite() {
            Ok(())
        } else {
            Err(NumericsError::Degenerate(
                "integrand produced a non-finite value".into(),
            ))
        }
    };
    check(total)?;
    let target = |total: T| T::lit(opts.abs_tol).max(T::lit(opts.rel_tol) * total.abs());
    while total_err > target(total) {
        if heap.len() >= opts.max_panels {
            return Err(NumericsError::AdaptiveBudget {
                panels: heap.len(),
                error: total_err.as_f64(),
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = (worst.a + worst.b) * T::lit(0.5);
        if !(mid > worst.a && mid < worst.b) {
            // interval no longer splittable at this precision
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        total_err = total_err - worst.error + e1 + e2;
        check(total)?;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    let mut panels: Vec<Panel<T>> = heap.into_vec();
    panels.sort_by(|x, y| x.a.as_f64().total_cmp(&y.a.as_f64()));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(AdaptiveResult {
        value,
        error,
        panels: panels.len(),
    })
}

/// `∫_T f dm` (normalized) with `f` a function of the angle; breakpoints are
/// angles, reduced modulo `2π`.
pub fn integrate_circle_adaptive<T, F>(
    f: F,
    breakpoints: &[T],
    opts: &AdaptiveOptions,
) -> Result<AdaptiveResult<T>, NumericsError>
where
    T: Real,
    F: Fn(T) -> T,
{
    let tau = T::TAU();
    let reduced: Vec<T> = breakpoints
        .iter()
        .map(|&t| {
            let r = t % tau;
            if r < T::zero() {
                r + tau
            } else {
                r
            }
        })
        .collect();
    let r = integrate_adaptive(f, T::zero(), tau, &reduced, opts)?;
    Ok(AdaptiveResult {
        value: r.value / tau,
        error: r.error / tau,
        panels: r.panels,
    })
}
