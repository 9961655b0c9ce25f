//! Condition sweeps over the cost library: the verdict of each sweep must
//! match the known classification of the cost.

use otreg::cost::{make_cost, make_cost_simple};
use otreg::curvature::{sweep_condition, SweepDomain, Verdict, DEFAULT_H};
use otreg::geometry::{BoxDomain, SphereCap};
use std::collections::BTreeMap;

fn boxes(src: (&[f64], &[f64]), tgt: (&[f64], &[f64])) -> SweepDomain {
    SweepDomain::Boxes {
        source: BoxDomain::new(src.0.to_vec(), src.1.to_vec()).unwrap(),
        target: BoxDomain::new(tgt.0.to_vec(), tgt.1.to_vec()).unwrap(),
    }
}

#[test]
fn sqrt_plus_is_uniformly_positive_on_unit_boxes() {
    let m = make_cost_simple("sqrt_plus", 2).unwrap();
    let d = boxes((&[0.0, 0.0], &[1.0, 1.0]), (&[0.0, 0.0], &[1.0, 1.0]));
    let r = sweep_condition(&m, &d, 500, 11, DEFAULT_H).unwrap();
    assert!(!r.inconclusive);
    assert!(matches!(r.verdict, Verdict::As(c0) if c0 > 0.0), "verdict {}", r.verdict);
}

#[test]
fn sqrt_minus_is_uniformly_positive_inside_unit_ball() {
    let m = make_cost_simple("sqrt_minus", 2).unwrap();
    // pairs stay within |x - y| <= ~0.78 so stencil shifts keep s < 1
    let d = boxes((&[0.0, 0.0], &[0.25, 0.25]), (&[0.3, 0.3], &[0.7, 0.7]));
    let r = sweep_condition(&m, &d, 500, 12, DEFAULT_H).unwrap();
    assert!(!r.inconclusive);
    assert!(matches!(r.verdict, Verdict::As(c0) if c0 > 0.0), "verdict {}", r.verdict);
}

#[test]
fn neg_log_is_uniformly_positive_off_diagonal() {
    let m = make_cost_simple("neg_log", 2).unwrap();
    let d = boxes((&[0.0, 0.0], &[0.3, 0.3]), (&[0.55, 0.55], &[1.8, 1.8]));
    let r = sweep_condition(&m, &d, 500, 13, DEFAULT_H).unwrap();
    assert!(!r.inconclusive);
    assert!(matches!(r.verdict, Verdict::As(_)), "verdict {}", r.verdict);
    // the constant-profile value on the reported scale
    assert!((r.c0_estimate - 24.0).abs() < 0.5, "c0 {}", r.c0_estimate);
}

#[test]
fn power_ratio_inside_validity_ball_is_uniformly_positive() {
    let mut params = BTreeMap::new();
    params.insert("p".to_string(), 1.5);
    let m = make_cost("power_ratio", &params, 2).unwrap();
    // validity needs |x - y|^2 < 2
    let d = boxes((&[0.0, 0.0], &[0.4, 0.4]), (&[0.4, 0.4], &[1.2, 1.2]));
    let r = sweep_condition(&m, &d, 500, 14, DEFAULT_H).unwrap();
    assert!(!r.inconclusive);
    assert!(matches!(r.verdict, Verdict::As(c0) if c0 > 0.0), "verdict {}", r.verdict);
}

#[test]
fn quadratic_is_flat() {
    let m = make_cost_simple("quadratic", 2).unwrap();
    let d = boxes((&[0.0, 0.0], &[1.0, 1.0]), (&[0.0, 0.0], &[1.0, 1.0]));
    let r = sweep_condition(&m, &d, 500, 15, DEFAULT_H).unwrap();
    assert!(!r.inconclusive);
    assert_eq!(r.verdict, Verdict::Aw, "verdict {}", r.verdict);
    assert!(r.min_value.abs() < 1e-5);
    assert_eq!(r.c0_estimate, 0.0);
}

#[test]
fn quartic_power_cost_is_violated_with_recorded_argmin() {
    let mut params = BTreeMap::new();
    params.insert("p".to_string(), 4.0);
    let m = make_cost("power_p", &params, 2).unwrap();
    let d = boxes((&[-0.3, -0.3], &[0.3, 0.3]), (&[0.5, -0.4], &[1.5, 0.4]));
    let r = sweep_condition(&m, &d, 1000, 16, DEFAULT_H).unwrap();
    assert!(!r.inconclusive);
    assert_eq!(r.verdict, Verdict::Violated, "verdict {}", r.verdict);
    let idx = r.argmin.expect("argmin recorded");
    assert!(r.samples[idx].value < 0.0);
    assert!(r.min_value < -1.0, "min {}", r.min_value);
}

#[test]
fn sphere_cost_is_uniformly_positive_inside_cut_margin() {
    let m = make_cost_simple("sphere_sq_dist", 3).unwrap();
    let d = SweepDomain::SphereCaps {
        source: SphereCap::new(&[0.0, 0.0, 1.0], 0.8).unwrap(),
        target: SphereCap::new(&[0.0, 0.0, 1.0], 1.6).unwrap(),
    };
    let r = sweep_condition(&m, &d, 400, 17, DEFAULT_H).unwrap();
    assert!(!r.inconclusive);
    assert!(matches!(r.verdict, Verdict::As(c0) if c0 > 0.0), "verdict {}", r.verdict);
}

#[test]
fn duality_symmetric_costs_agree_on_mirrored_domains() {
    // c*(y, x) = c(x, y); for a symmetric cost the sweep of c on
    // (source, target) and on the swapped domains must agree in verdict.
    let m = make_cost_simple("sqrt_plus", 2).unwrap();
    let fwd = boxes((&[0.0, 0.0], &[0.6, 0.6]), (&[0.4, 0.4], &[1.0, 1.0]));
    let bwd = boxes((&[0.4, 0.4], &[1.0, 1.0]), (&[0.0, 0.0], &[0.6, 0.6]));
    let rf = sweep_condition(&m, &fwd, 300, 18, DEFAULT_H).unwrap();
    let rb = sweep_condition(&m, &bwd, 318, 18, DEFAULT_H).unwrap();
    assert!(matches!(rf.verdict, Verdict::As(_)));
    assert!(matches!(rb.verdict, Verdict::As(_)));
}

#[test]
fn sweep_is_deterministic_for_a_seed() {
    let m = make_cost_simple("sqrt_plus", 2).unwrap();
    let d = boxes((&[0.0, 0.0], &[1.0, 1.0]), (&[0.0, 0.0], &[1.0, 1.0]));
    let a = sweep_condition(&m, &d, 100, 5, DEFAULT_H).unwrap();
    let b = sweep_condition(&m, &d, 100, 5, DEFAULT_H).unwrap();
    assert_eq!(a.min_value, b.min_value);
    assert_eq!(a.argmin, b.argmin);
    for (s, t) in a.samples.iter().zip(&b.samples) {
        assert!(s.value == t.value || (s.value.is_nan() && t.value.is_nan()));
    }
}
