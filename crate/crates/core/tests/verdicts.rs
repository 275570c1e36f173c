use std::sync::Arc;

use closed_range::criteria::{analyze_symbol, CriteriaConfig, VerdictState};
use closed_range::symbols::{parse_symbol, SelfMap, Symbol};

fn quick() -> CriteriaConfig {
    let mut cfg = CriteriaConfig {
        samples: 100_000,
        gc_samples: 1024,
        ..CriteriaConfig::default()
    };
    cfg.luecking.enabled = false;
    cfg.direct_probe.enabled = false;
    cfg
}

fn codes(phi: Symbol<f64>, ps: &[f64]) -> Vec<String> {
    let phi: Arc<dyn SelfMap<f64>> = Arc::new(phi);
    analyze_symbol(phi, ps, &quick())
        .unwrap()
        .into_iter()
        .map(|r| r.codes())
        .collect()
}

/// Closed range is unchanged by rotating the target or the source disk.
#[test]
fn verdicts_are_rotation_invariant() {
    for (text, expected) in [
        ("blaschke 1 0 0", "CCCC"),
        ("moebius 0.5", "CCCC"),
        ("affine 0.5 0.5", "NNNN"),
    ] {
        let phi = parse_symbol::<f64>(text).unwrap();
        for alpha in [0.7, 2.9] {
            let rot = Symbol::rotation(alpha);
            let after = Symbol::compose(&rot, &phi).unwrap();
            let before = Symbol::compose(&phi, &rot).unwrap();
            let both = Symbol::compose(&after, &Symbol::rotation(-1.3)).unwrap();
            for s in [phi.clone(), after, before, both] {
                let tag = s.to_string();
                assert_eq!(codes(s, &[2.0]), [expected], "{tag}");
            }
        }
    }
}

#[test]
fn contraction_family_stays_not_closed() {
    for r in [0.3, 0.6, 0.9] {
        let phi = Symbol::affine(r, num_complex::Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(codes(phi, &[1.0, 4.0]), ["NNNN", "NNNN"], "r = {r}");
    }
}

#[test]
fn composition_with_inner_map_keeps_closed_range() {
    let phi = parse_symbol::<f64>("moebius 0.3,0.2 | blaschke 1 0 0").unwrap();
    let phi: Arc<dyn SelfMap<f64>> = Arc::new(phi);
    let reports = analyze_symbol(phi, &[0.5, 2.0], &quick()).unwrap();
    for r in reports {
        assert!(r.consistent);
        assert_eq!(r.overall, VerdictState::Closed, "p = {}", r.p);
    }
}
