//! Built-in symbol and test-function sets.

use closed_range::hardy::{outer_function, BoundaryModulus, TestFunction};
use closed_range::numerics::CircleQuadrature;
use closed_range::symbols::{parse_symbol_list, NamedSymbol};
use num_complex::Complex64;

/// Six closed-range symbols followed by four that are not.
pub const GOLDEN_CORPUS: &str = "\
identity   = identity
z2         = blaschke 1 0 0
z3         = blaschke 1 0 0 0
psi-0.5    = moebius 0.5
psi-0.5-z2 = moebius 0.5 | blaschke 1 0 0
blaschke3  = blaschke 1 0 0.5 -0.3,0.4
half-z     = affine 0.5 0
z-0.8      = affine 0.8 0
half-shift = affine 0.5 0.5
half-shift-sq = poly 0.25 0.5 0.25
";

/// How many leading entries of [`GOLDEN_CORPUS`] have closed range.
pub const GOLDEN_CLOSED: usize = 6;

pub fn golden_corpus() -> Vec<NamedSymbol<f64>> {
    parse_symbol_list(GOLDEN_CORPUS).expect("built-in corpus parses")
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Functions analytic across the closed disk and free of zeros there, so
/// every norm formula applies at every exponent.
pub fn zero_free_family() -> Vec<TestFunction<f64>> {
    let poly = |cs: &[Complex64]| TestFunction::polynomial(cs.to_vec()).expect("nonzero polynomial");
    let ker = |l: Complex64, e: f64| TestFunction::raw_kernel(l, 1.0, e).expect("|λ| < 1");
    let q = CircleQuadrature::new(1024).expect("positive node count");
    let outer = |tag: &str, field: fn(f64) -> f64| {
        outer_function(&BoundaryModulus::sampled(tag, field), &q).expect("positive modulus")
    };
    vec![
        TestFunction::constant(c(0.7, 0.2)).expect("nonzero constant"),
        poly(&[c(2.0, 0.0), c(1.0, 0.0)]),
        poly(&[c(1.0, 0.0), c(-0.5, 0.0)]),
        poly(&[c(3.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        poly(&[c(1.0, 0.0), c(0.3, 0.0), c(0.2, 0.0)]),
        poly(&[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]),
        poly(&[c(1.0, 0.5), c(0.4, -0.2)]),
        ker(c(0.5, 0.0), 1.0),
        ker(c(0.0, 0.3), 1.0),
        ker(c(-0.6, 0.0), 2.0),
        ker(c(0.4, 0.4), 0.5),
        outer("exp(0.3 cos t)", |t| (0.3 * t.cos()).exp()),
        outer("2 + cos t", |t| 2.0 + t.cos()),
    ]
}
