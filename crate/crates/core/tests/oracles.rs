//! Reference values computed independently at 40+ significant digits, and
//! operator invariants on the monomial grid.

use genfrac::function::{Interval, TestFunction};
use genfrac::operator::{evaluate_classical, oracle_grid, ClassicalOperator};
use genfrac::{closed_form_monomial, evaluate, evaluate_with, OperatorParams, QuadratureConfig, Side};

fn f1(t: f64) -> f64 {
    (0.3 + 0.5 * t - 0.2 * t * t).exp()
}

fn f2(t: f64) -> f64 {
    let s = (2.0 * t + 0.4).sin();
    1.5 + s * s
}

fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
    let rel = ((got - want) / want).abs();
    assert!(rel <= tol, "{what}: got {got}, want {want}, rel {rel:e}");
}

#[test]
fn generalized_left_references() {
    let cfg = QuadratureConfig::default();
    let cases: [(OperatorParams, fn(f64) -> f64, f64, f64); 3] = [
        (OperatorParams::left(0.7, 0.3, 1.5, 0.5, 0.8, 0.0), f1, 1.7, 5.083_447_697_019_073_146_5),
        (OperatorParams::left(0.4, 0.2, 2.5, -0.3, -0.5, 0.5), f2, 2.0, 1.901_895_217_519_881_002_9),
        (OperatorParams::left(2.3, 1.0, 0.5, 0.0, 0.0, 0.2), f1, 1.3, 0.517_342_341_180_954_457_55),
    ];
    for (p, f, x, want) in cases {
        let r = evaluate_with(f, &p, x, &cfg).unwrap();
        assert_rel(r.value, want, 1e-9, &p.to_string());
        assert!((r.value - want).abs() <= 10.0 * r.error_estimate.max(1e-15 * want), "{p}: {r:?}");
    }
}

#[test]
fn generalized_right_references() {
    let cfg = QuadratureConfig::default();
    let p = OperatorParams::left(0.6, 0.4, 1.5, 0.5, 0.3, 0.0).with_side(Side::Right).with_upper(2.0);
    assert_rel(evaluate_with(f1, &p, 0.8, &cfg).unwrap().value, 2.421_465_241_783_455_588_7, 1e-9, "right f1");
    let rl = OperatorParams::riemann_liouville(0.5, 0.0).with_side(Side::Right).with_upper(1.5);
    assert_rel(evaluate_with(|_| 1.0, &rl, 0.5, &cfg).unwrap().value, 1.128_379_167_095_512_573_9, 1e-10, "right RL");
}

#[test]
fn hadamard_references() {
    let cfg = QuadratureConfig::default();
    let d = Interval::new(1.0, 2.5).unwrap();
    let f = TestFunction::parse("expoly:0.3,0.5,-0.2", d).unwrap();
    let r = evaluate_classical(&ClassicalOperator::Hadamard { alpha: 0.5, a: 1.0 }, &f, 2.5, &cfg).unwrap();
    assert_rel(r.value, 1.758_579_713_940_484_012_6, 1e-10, "hadamard");
}

#[test]
fn closed_form_examples() {
    let p = OperatorParams::left(2.0, 0.3, 2.0, 0.5, 1.0, 0.0);
    assert_rel(closed_form_monomial(&p, 2.0, 1.0).unwrap(), 0.092_828_845_297_855_489_01, 4e-15, "closed form");
}

#[test]
fn error_estimates_are_honest_on_oracle_grid() {
    let cfg = QuadratureConfig::default();
    let x = 1.5;
    for pt in oracle_grid() {
        let exact = closed_form_monomial(&pt.params, pt.sigma, x).unwrap();
        let sigma = pt.sigma;
        let r = evaluate_with(|t| t.powf(sigma), &pt.params, x, &cfg).unwrap();
        // the estimate cannot resolve below a few ulps of the value
        let floor = 8.0 * f64::EPSILON * exact.abs();
        assert!(
            (r.value - exact).abs() <= 10.0 * r.error_estimate.max(floor),
            "{} sigma={}: {r:?} vs {exact}",
            pt.params,
            pt.sigma
        );
    }
}

#[test]
fn beta_is_immaterial_at_rho_one() {
    let cfg = QuadratureConfig::default();
    let base = evaluate_with(f1, &OperatorParams::left(0.6, 0.0, 1.0, 0.4, 0.2, 0.1), 1.9, &cfg).unwrap();
    for beta in [-2.0, 0.6, 3.5] {
        let r = evaluate_with(f1, &OperatorParams::left(0.6, beta, 1.0, 0.4, 0.2, 0.1), 1.9, &cfg).unwrap();
        assert_eq!(r.value, base.value, "beta={beta}");
    }
}

#[test]
fn kappa_scales_by_power_of_x() {
    let cfg = QuadratureConfig::default();
    let x = 1.9;
    let zero = evaluate_with(f2, &OperatorParams::left(0.6, 0.2, 1.7, 0.4, 0.0, 0.0), x, &cfg).unwrap().value;
    for kappa in [-1.3, 0.5, 2.0] {
        let v = evaluate_with(f2, &OperatorParams::left(0.6, 0.2, 1.7, 0.4, kappa, 0.0), x, &cfg).unwrap().value;
        assert_rel(v, zero * x.powf(kappa), 1e-14, &format!("kappa={kappa}"));
    }
}

#[test]
fn test_function_path_matches_closure_path() {
    let cfg = QuadratureConfig::default();
    let p = OperatorParams::left(0.7, 0.3, 1.5, 0.5, 0.8, 0.0);
    let f = TestFunction::parse("expoly:0.3,0.5,-0.2", Interval::new(0.0, 1.7).unwrap()).unwrap();
    assert_eq!(evaluate(&p, &f, 1.7, &cfg).unwrap(), evaluate_with(f1, &p, 1.7, &cfg).unwrap());
}
