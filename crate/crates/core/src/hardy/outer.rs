use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use super::function::TestFunction;
use super::HardyError;
use crate::numerics::{CircleQuadrature, PolyCoeffs};
use crate::scalar::{arg_positive, unit};
use crate::Real;

/// Arc `[start, start + length)` of the circle on which the modulus equals
/// `value`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ModulusArc<T> {
    pub start: T,
    pub length: T,
    pub value: T,
}

impl<T: Real> ModulusArc<T> {
    fn contains(&self, theta: T) -> bool {
        let d = theta - self.start;
        let d = d - T::TAU() * (d / T::TAU()).floor();
        d < self.length
    }
}

/// A positive boundary modulus `ψ` on the circle.
#[derive(Clone)]
pub enum BoundaryModulus<T> {
    Constant(T),
    /// `base` off the arcs, the arc value on each (disjoint) arc.
    Step {
        base: T,
        arcs: Vec<ModulusArc<T>>,
    },
    /// A continuous modulus given pointwise in the angle.
    Sampled {
        tag: String,
        field: Arc<dyn Fn(T) -> T + Send + Sync>,
    },
}

impl<T: Real> fmt::Debug for BoundaryModulus<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoundaryModulus({})", self.tag())
    }
}

impl<T: Real> BoundaryModulus<T> {
    /// `inside` on `[start, start + length)`, `outside` elsewhere.
    pub fn two_valued(start: T, length: T, inside: T, outside: T) -> Self {
        Self::Step {
            base: outside,
            arcs: vec![ModulusArc {
                start,
                length,
                value: inside,
            }],
        }
    }

    pub fn sampled(tag: impl Into<String>, field: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::Sampled {
            tag: tag.into(),
            field: Arc::new(field),
        }
    }

    pub fn eval(&self, theta: T) -> T {
        match self {
            Self::Constant(c) => *c,
            Self::Step { base, arcs } => arcs.iter().find(|a| a.contains(theta)).map_or(*base, |a| a.value),
            Self::Sampled { field, .. } => field(theta),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            Self::Constant(c) => format!("const {c}"),
            Self::Step { base, arcs } => {
                let parts: Vec<String> = arcs
                    .iter()
                    .map(|a| format!("{}@[{},+{})", a.value, a.start, a.length))
                    .collect();
                format!("step {base}; {}", parts.join(" "))
            }
            Self::Sampled { tag, .. } => tag.clone(),
        }
    }
}

#[derive(Debug, Clone)]
struct StepArc<T> {
    zeta1: Complex<T>,
    zeta2: Complex<T>,
    length: T,
    /// `log(arc value) − log(base)`.
    jump: T,
}

#[derive(Debug, Clone)]
enum Repr<T> {
    /// `H(z) = log base + Σ jumpₐ · Iₐ(z)` with `Iₐ` the Herglotz integral of
    /// the arc indicator, in closed form.
    Step { log_base: T, arcs: Vec<StepArc<T>> },
    /// `H(z) = c₀ + 2 Σ_{k≥1} cₖ zᵏ` from the Fourier coefficients of `log ψ`.
    Series(PolyCoeffs<T>),
}

/// The outer function `exp(∫ (e^{iθ}+z)/(e^{iθ}−z) log ψ(θ) dm(θ))`.
#[derive(Debug, Clone)]
pub struct OuterFunction<T> {
    repr: Repr<T>,
    modulus_tag: String,
}

impl<T: Real> OuterFunction<T> {
    pub fn modulus_tag(&self) -> &str {
        &self.modulus_tag
    }

    /// `H = log f` and `H′`.
    pub fn log_with_deriv(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        match &self.repr {
            Repr::Series(h) => h.eval_with_deriv(z),
            Repr::Step { log_base, arcs } => {
                let mut h = Complex::new(*log_base, T::zero());
                let mut dh = Complex::new(T::zero(), T::zero());
                let pi = T::PI();
                let i_over_pi = Complex::new(T::zero(), T::one() / pi);
                for a in arcs {
                    let d1 = a.zeta1 - z;
                    let d2 = a.zeta2 - z;
                    // counterclockwise turn of ζ − z along the arc, in [0, 2π)
                    let turn = arg_positive(d2 / d1);
                    let re = turn / pi - a.length / T::TAU();
                    let im = -(d2.norm() / d1.norm()).ln() / pi;
                    h = h + Complex::new(re, im) * a.jump;
                    // I′(z) = (1/(πi)) (1/(ζ₁ − z) − 1/(ζ₂ − z))
                    dh = dh - (d1.inv() - d2.inv()) * i_over_pi * a.jump;
                }
                (h, dh)
            }
        }
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.log_with_deriv(z).0.exp()
    }

    pub fn eval_with_deriv(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let (h, dh) = self.log_with_deriv(z);
        let f = h.exp();
        (f, dh * f)
    }
}

fn positive<T: Real>(x: T, what: &str) -> Result<T, HardyError> {
    if x > T::zero() && x.is_finite() {
        Ok(x)
    } else {
        Err(HardyError::InvalidModulus(format!("{what} must be positive, got {x}")))
    }
}

/// Constructs the outer function with boundary modulus `ψ`.
///
/// Step moduli use the closed-form arc integrals and ignore `q`; sampled
/// moduli are expanded in the Fourier series of `log ψ` on the nodes of `q`.
pub fn outer_function<T: Real>(
    psi: &BoundaryModulus<T>,
    q: &CircleQuadrature<T>,
) -> Result<TestFunction<T>, HardyError> {
    let repr = match psi {
        BoundaryModulus::Constant(c) => Repr::Series(PolyCoeffs::constant(Complex::new(
            positive(*c, "constant modulus")?.ln(),
            T::zero(),
        ))),
        BoundaryModulus::Step { base, arcs } => {
            let log_base = positive(*base, "base modulus")?.ln();
            for (i, a) in arcs.iter().enumerate() {
                positive(a.value, "arc modulus")?;
                if !(a.length > T::zero() && a.length < T::TAU()) {
                    return Err(HardyError::InvalidModulus(format!(
                        "arc length {} outside (0, 2π)",
                        a.length
                    )));
                }
                for b in &arcs[i + 1..] {
                    if a.contains(b.start) || b.contains(a.start) {
                        return Err(HardyError::InvalidModulus("arcs overlap".into()));
                    }
                }
            }
            Repr::Step {
                log_base,
                arcs: arcs
                    .iter()
                    .map(|a| StepArc {
                        zeta1: unit(a.start),
                        zeta2: unit(a.start + a.length),
                        length: a.length,
                        jump: a.value.ln() - log_base,
                    })
                    .collect(),
            }
        }
        BoundaryModulus::Sampled { field, .. } => {
            let n = q.nodes();
            let logs = (0..n)
                .map(|j| positive(field(q.angle(j)), "sampled modulus").map(T::ln))
                .collect::<Result<Vec<T>, _>>()?;
            let w = q.weight();
            let coeff = |k: usize| {
                let kk = T::from_usize_lossy(k);
                logs.iter()
                    .enumerate()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (j, &l)| {
                        acc + unit(-kk * q.angle(j)) * l
                    })
                    * w
            };
            let c0 = coeff(0);
            let mut series = vec![Complex::new(c0.re, T::zero())];
            series.extend((1..n / 2).map(|k| coeff(k) * T::lit(2.0)));
            let scale = series.iter().map(|c| c.norm()).fold(T::zero(), T::max);
            let floor = T::epsilon() * scale.max(T::one());
            while series.len() > 1 && series.last().is_some_and(|c| c.norm() <= floor) {
                series.pop();
            }
            Repr::Series(PolyCoeffs::new(series)?)
        }
    };
    Ok(TestFunction::from_outer(OuterFunction {
        repr,
        modulus_tag: psi.tag(),
    }))
}
