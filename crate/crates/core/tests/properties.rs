use genfrac::function::{generate_box_pair, generate_ratio_pair, BoxBounds, Expr, Interval, TestFunction};
use genfrac::inequality::{c1, run_check, CheckConfig, Theorem};
use genfrac::operator::Operator;
use genfrac::{beta_fn, evaluate_with, gamma_fn, OperatorParams, QuadratureConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn smooth(t: f64) -> f64 {
    (0.2 * t).exp() + 0.5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gamma_recurrence(x in 0.01f64..50.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!(((lhs - rhs) / rhs).abs() <= 1e-12, "x={x}: {lhs} vs {rhs}");
    }

    #[test]
    fn beta_symmetry(a in 0.01f64..20.0, b in 0.01f64..20.0) {
        prop_assert_eq!(beta_fn(a, b).unwrap(), beta_fn(b, a).unwrap());
    }

    #[test]
    fn c1_at_least_one(m in 0.01f64..10.0, w in 0.0f64..10.0) {
        let big_m = m + w;
        let c = c1(m, big_m).unwrap();
        prop_assert!(c >= 1.0);
        if w == 0.0 {
            prop_assert_eq!(c, 1.0);
        } else {
            prop_assert!(c > 1.0 || (big_m - m) / ((m + 1.0) * (big_m + 1.0)) < 1e-16);
        }
    }

    #[test]
    fn operator_is_linear(
        alpha in 0.2f64..3.0, rho in 0.3f64..3.0, eta in 0.0f64..1.5, kappa in -1.0f64..1.0,
        lambda in 0.0f64..5.0, x in 0.5f64..3.0,
    ) {
        let cfg = QuadratureConfig::default();
        let p = OperatorParams::left(alpha, 0.5, rho, eta, kappa, 0.0);
        let g = |t: f64| 1.0 + t * t;
        let combined = evaluate_with(|t| smooth(t) + lambda * g(t), &p, x, &cfg).unwrap();
        let a = evaluate_with(smooth, &p, x, &cfg).unwrap();
        let b = evaluate_with(g, &p, x, &cfg).unwrap();
        let sum = a.value + lambda * b.value;
        let budget = combined.error_estimate + a.error_estimate + lambda * b.error_estimate + 1e-14 * sum.abs();
        prop_assert!((combined.value - sum).abs() <= budget, "{} vs {} (budget {})", combined.value, sum, budget);
    }

    #[test]
    fn operator_is_monotone(
        alpha in 0.2f64..3.0, rho in 0.3f64..3.0, eta in 0.0f64..1.5, a in 0.0f64..1.0,
        bump in 0.0f64..1.0, span in 0.2f64..2.0,
    ) {
        let cfg = QuadratureConfig::default();
        let p = OperatorParams::left(alpha, alpha, rho, eta, 0.0, a);
        let x = a + span;
        let lo = evaluate_with(smooth, &p, x, &cfg).unwrap();
        let hi = evaluate_with(|t| smooth(t) + bump * (1.0 + (3.0 * t).sin()), &p, x, &cfg).unwrap();
        prop_assert!(lo.value <= hi.value + 2.0 * (lo.error_estimate + hi.error_estimate));
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), m in 0.1f64..3.0, w in 0.0f64..3.0, k in 0u32..=5) {
        let d = Interval::new(0.2, 2.2).unwrap();
        let a = generate_ratio_pair(seed, m, m + w, d, k).unwrap();
        let b = generate_ratio_pair(seed, m, m + w, d, k).unwrap();
        prop_assert_eq!(a.f.to_string(), b.f.to_string());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn composition_stays_positive(seed in any::<u64>(), p in 1.0f64..4.0) {
        let d = Interval::new(0.0, 2.0).unwrap();
        let pair = generate_ratio_pair(seed, 0.5, 2.0, d, 3).unwrap();
        let (f, g) = (pair.f.expr.clone(), pair.g.expr.clone());
        let sum = TestFunction::new(Expr::Sum(vec![f.clone(), g.clone()]), d).unwrap();
        let prod = TestFunction::new(Expr::Product(vec![f.clone(), g]), d).unwrap();
        for t in d.grid(200) {
            for v in [sum.value(t), prod.value(t), pair.f.value(t).powf(p)] {
                prop_assert!(v.is_finite() && v > 0.0);
            }
        }
    }
}

#[test]
fn factorials_are_exact() {
    let mut fact = 1.0f64;
    for n in 1..=20u32 {
        let g = gamma_fn(n as f64).unwrap();
        assert!(((g - fact) / fact).abs() <= 1e-13, "n={n}");
        fact *= n as f64;
    }
}

#[test]
fn ratio_certification_on_dense_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for _ in 0..10_000 {
        let seed: u64 = rng.gen();
        let m = rng.gen_range(0.05..5.0);
        let big_m = m * rng.gen_range(1.0..20.0);
        let lo = rng.gen_range(0.0..3.0);
        let d = Interval::new(lo, lo + rng.gen_range(0.5..2.5)).unwrap();
        let pair = generate_ratio_pair(seed, m, big_m, d, rng.gen_range(0..=6)).unwrap();
        let (mut rmin, mut rmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for t in d.grid(10_000) {
            let r = pair.f.value(t) / pair.g.value(t);
            rmin = rmin.min(r);
            rmax = rmax.max(r);
        }
        assert!(rmin >= m - 1e-12 && rmax <= big_m + 1e-12, "seed={seed}: [{rmin}, {rmax}] vs [{m}, {big_m}]");
    }
}

#[test]
fn widening_the_band_keeps_checks_valid() {
    let cfg = QuadratureConfig::default();
    let d = Interval::new(0.0, 1.8).unwrap();
    let ops = [
        Operator::Generalized(OperatorParams::riemann_liouville(0.5, 0.0)),
        Operator::Generalized(OperatorParams::left(0.7, 0.3, 1.5, 0.5, 0.8, 0.0)),
    ];
    for seed in 0..20u64 {
        let pair = generate_ratio_pair(seed, 0.8, 1.5, d, 3).unwrap();
        let mut wide = pair.clone();
        wide.m = 0.5;
        wide.big_m = 3.0;
        assert!(c1(wide.m, wide.big_m).unwrap() >= c1(pair.m, pair.big_m).unwrap());
        for op in &ops {
            for th in [Theorem::T8, Theorem::T9, Theorem::T10, Theorem::T11, Theorem::T12, Theorem::T14, Theorem::T15] {
                let check = run_check(th, &wide, op, 1.8, &CheckConfig::default(), &cfg).unwrap();
                assert!(check.satisfied, "seed={seed} {th}: {check:?}");
            }
        }
    }
}

#[test]
fn box_pairs_respect_boxes_on_dense_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..500 {
        let a_lo = rng.gen_range(0.1..3.0);
        let b_lo = rng.gen_range(0.1..3.0);
        let b = BoxBounds {
            a_lo,
            a_hi: a_lo * rng.gen_range(1.0..4.0),
            b_lo,
            b_hi: b_lo * rng.gen_range(1.0..4.0),
        };
        let d = Interval::new(1.0, 3.0).unwrap();
        let pair = generate_box_pair(rng.gen(), b, d, 3).unwrap();
        for t in d.grid(2_000) {
            let (f, g) = (pair.f.value(t), pair.g.value(t));
            assert!(f >= b.a_lo * (1.0 - 1e-12) && f <= b.a_hi * (1.0 + 1e-12));
            assert!(g >= b.b_lo * (1.0 - 1e-12) && g <= b.b_hi * (1.0 + 1e-12));
        }
    }
}
