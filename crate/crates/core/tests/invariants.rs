use std::f64::consts::TAU;

use closed_range::geometry::{pseudo_distance, pullback_measure, CarlesonWindow, PseudoDisk};
use closed_range::hardy::{norm_boundary, norm_hardy_stein, HardyExponent, RadiusGrid, TestFunction};
use closed_range::nevanlinna::counting;
use closed_range::numerics::{CircleQuadrature, DiskQuadrature, SeededSampler};
use closed_range::symbols::{parse_symbol, SelfMap, Symbol};
use num_complex::Complex64;
use proptest::prelude::*;

fn disk_point(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Preimages of `w` under `zⁿ` are the n-th roots, so `N(w) = log(1/|w|)`.
    #[test]
    fn counting_function_of_powers(n in 1usize..5, r in 0.05f64..0.95, t in 0.0..TAU) {
        let phi = Symbol::<f64>::power(n).unwrap();
        let w = Complex64::from_polar(r, t);
        let got = counting(&phi, w).unwrap();
        prop_assert!((got + r.ln()).abs() < 1e-9, "N = {got}, expected {}", -r.ln());
    }

    /// `ψ_a(z) = (z − a)/(1 − āz)` has the single preimage `(w + a)/(1 + āw)`.
    #[test]
    fn counting_function_of_automorphism(a in disk_point(0.9), w in disk_point(0.95)) {
        prop_assume!((w + a).norm() > 1e-3);
        let phi = Symbol::moebius(a).unwrap();
        let pre = (w + a) / (Complex64::new(1.0, 0.0) + a.conj() * w);
        let got = counting(&phi, w).unwrap();
        prop_assert!((got + pre.norm().ln()).abs() < 1e-9 * (1.0 + got.abs()));
    }

    #[test]
    fn symbols_map_disk_into_disk(a in disk_point(0.95), zeros in proptest::collection::vec(disk_point(0.95), 1..4), z in disk_point(0.999)) {
        let m = Symbol::moebius(a).unwrap();
        let b = Symbol::blaschke(zeros, Complex64::new(1.0, 0.0)).unwrap();
        let comp = Symbol::compose(&m, &b).unwrap();
        for phi in [&m, &b, &comp] {
            prop_assert!(phi.eval(z).norm() < 1.0);
        }
    }

    /// Display and parse agree on the map, not just the text.
    #[test]
    fn text_round_trip_preserves_values(a in disk_point(0.9), s in 0.1f64..0.5, z in disk_point(0.99)) {
        let inner = Symbol::affine(s, a * 0.5).unwrap();
        let phi = Symbol::compose(&Symbol::moebius(a).unwrap(), &inner).unwrap();
        let back: Symbol<f64> = parse_symbol(&phi.to_string()).unwrap();
        prop_assert!((back.eval(z) - phi.eval(z)).norm() < 1e-12);
    }

    /// `‖f‖²_{H²} = Σ|aₖ|²`, and Hardy–Stein gives the same value.
    #[test]
    fn polynomial_h2_norm_is_parseval(coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6)) {
        let coeffs: Vec<Complex64> = coeffs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        prop_assume!(coeffs.iter().any(|c| c.norm() > 1e-3));
        let parseval: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let f = TestFunction::polynomial(coeffs).unwrap();
        let p = HardyExponent::new(2.0).unwrap();
        let b = norm_boundary(&f, p, &CircleQuadrature::new(64).unwrap(), &RadiusGrid::boundary()).unwrap();
        let hs = norm_hardy_stein(&f, p, &DiskQuadrature::new(48, 64, 2).unwrap()).unwrap();
        prop_assert!((b - parseval).abs() < 1e-12 * parseval.max(1.0));
        prop_assert!((hs - parseval).abs() < 1e-9 * parseval.max(1.0));
    }

    #[test]
    fn pseudo_disk_is_the_euclidean_disk(a in disk_point(0.95), eta in 0.05f64..0.95, z in disk_point(0.999)) {
        let d = PseudoDisk::new(a, eta).unwrap();
        let inside = (z - d.euclidean_center()).norm() < d.euclidean_radius();
        let rho = pseudo_distance(a, z);
        prop_assume!((rho - eta).abs() > 1e-9);
        prop_assert_eq!(d.contains(z), inside);
        prop_assert!(d.contains(a));
    }

    /// Pullback masses: total mass 1 and windows nested in `h`.
    #[test]
    fn window_masses_are_monotone(a in disk_point(0.8), theta in 0.0..TAU, seed in 0u64..1000) {
        let phi = Symbol::moebius(a).unwrap();
        let mu = pullback_measure(&phi, 4096, &SeededSampler::new(seed)).unwrap();
        prop_assert!((mu.total_mass() - 1.0).abs() < 1e-12);
        let mut last = 0.0;
        for k in (1..8).rev() {
            let w = CarlesonWindow::at_angle(theta, 0.5f64.powi(k)).unwrap();
            let m = mu.measure_of_window(&w);
            prop_assert!(m >= last);
            last = m;
        }
    }
}

#[test]
fn pullback_measure_is_seed_deterministic() {
    let phi = Symbol::<f64>::moebius(Complex64::new(0.3, -0.2)).unwrap();
    let a = pullback_measure(&phi, 10_000, &SeededSampler::new(9)).unwrap();
    let b = pullback_measure(&phi, 10_000, &SeededSampler::new(9)).unwrap();
    let c = pullback_measure(&phi, 10_000, &SeededSampler::new(10)).unwrap();
    assert_eq!(a.atoms(), b.atoms());
    assert_ne!(a.atoms(), c.atoms());
}

#[test]
fn single_precision_pipeline() {
    use num_complex::Complex32;
    let q = DiskQuadrature::<f32>::new(64, 32, 2).unwrap();
    assert!((q.integrate(|z| 1.0 - z.norm_sqr()).unwrap() - 0.5).abs() < 1e-5);
    let phi = Symbol::<f32>::power(2).unwrap();
    let n = counting(&phi, Complex32::new(0.25, 0.0)).unwrap();
    assert!((n - 4.0f32.ln()).abs() < 1e-5);
    let mu = pullback_measure(&phi, 1024, &SeededSampler::new(1)).unwrap();
    assert_eq!(mu.mass_on_circle(1e-5), 1.0);
}

/// The explicit p ≤ 1 kernels are used without renormalizing. Their norms stay
/// within fixed bounds as |λ| → 1, and at p = 1 the kernel is a Poisson kernel of norm 1.
#[test]
fn explicit_kernel_norms_stay_bounded() {
    use closed_range::hardy::{kernel, KernelRegime, KernelSpec};
    for p in [0.25, 0.5, 0.75, 1.0] {
        let hp = HardyExponent::new(p).unwrap();
        let mut norms = Vec::new();
        for k in 1..=14 {
            let lambda = Complex64::from_polar(1.0 - 0.5f64.powi(k), 0.4 * k as f64);
            let spec = KernelSpec::new(lambda, hp).unwrap();
            assert_eq!(spec.regime, KernelRegime::Explicit);
            let q = CircleQuadrature::resolving(1.0 - lambda.norm(), 256, 1 << 22);
            norms.push(norm_boundary(&kernel(&spec).unwrap(), hp, &q, &RadiusGrid::boundary()).unwrap());
        }
        let lo = norms.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = norms.iter().copied().fold(0.0, f64::max);
        if p == 1.0 {
            assert!(norms.iter().all(|n| (n - 1.0).abs() < 1e-9), "{norms:?}");
        }
        assert!(lo > 0.2 && hi < 5.0, "p = {p}: {norms:?}");
        // Converges as |λ| → 1: the increments shrink, like 2^{−kp} in theory.
        let steps: Vec<f64> = norms[6..].windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(
            steps.windows(2).all(|d| d[1] <= d[0] * 1.01 + 1e-12),
            "p = {p}: {steps:?}"
        );
    }
}

#[test]
fn documented_symbol_file_parses() {
    let text = "\
# comment
square   = blaschke 1,0 0,0 0,0
psi      = moebius 0.5,0          # (z − a)/(1 − āz), optional rotation
shifted  = affine 0.5 0.5,0       # r z + s
poly     = poly 0.25 0.5 0.25     # ascending coefficients
composed = moebius 0.5 | blaschke 1 0 0
";
    let list = closed_range::symbols::parse_symbol_list::<f64>(text).unwrap();
    let names: Vec<&str> = list.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["square", "psi", "shifted", "poly", "composed"]);
    let z = Complex64::new(0.3, -0.4);
    assert!((list[0].symbol.eval(z) - z * z).norm() < 1e-14);
    assert!((list[2].symbol.eval(z) - (z * 0.5 + 0.5)).norm() < 1e-14);
    assert!((list[3].symbol.eval(z) - (z * 0.5 + 0.5).powi(2)).norm() < 1e-14);
}
