use std::cell::Cell;

use crate::error::{Error, Result};
use crate::function::{PairKind, PositivePair};
use crate::operator::Operator;
use crate::quadrature::QuadratureConfig;

use super::{c1, c2, c3, c4, c4_statement, c5, c6, CheckConfig, Est, InequalityCheck, Theorem};

/// Operator evaluations for one check. A non-converged quadrature contributes
/// its best estimate and marks the whole check inconclusive.
struct Ctx<'a> {
    op: &'a Operator,
    x: f64,
    quad: &'a QuadratureConfig,
    stalled: Cell<bool>,
}

impl<'a> Ctx<'a> {
    fn new(op: &'a Operator, x: f64, cfg: &CheckConfig, quad: &'a QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        op.validate()?;
        Ok(Self {
            op,
            x,
            quad,
            stalled: Cell::new(false),
        })
    }

    fn int(&self, h: impl Fn(f64) -> f64) -> Result<Est> {
        match self.op.apply(h, self.x, self.quad) {
            Ok(r) => Ok(r.into()),
            Err(Error::NonConvergence { best, .. }) => {
                self.stalled.set(true);
                Ok(best.into())
            }
            Err(e) => Err(e),
        }
    }

    /// `(I h^p)^(1/p)` with the power taken pointwise.
    fn norm(&self, h: impl Fn(f64) -> f64, p: f64) -> Result<Est> {
        if p == 1.0 {
            self.int(h)
        } else {
            Ok(self.int(|t| h(t).powf(p))?.powf(p.recip()))
        }
    }

    fn finish(&self, check: InequalityCheck) -> InequalityCheck {
        if self.stalled.get() {
            check.mark_inconclusive()
        } else {
            check
        }
    }
}

fn conjugate_exponents(cfg: &CheckConfig, theorem: Theorem) -> Result<(f64, f64)> {
    if cfg.p <= 1.0 {
        return Err(Error::Config(format!("{theorem} needs p > 1, got {}", cfg.p)));
    }
    Ok((cfg.p, cfg.q()))
}

/// `(I f^p)^(1/p) + (I g^p)^(1/p) <= c1 (I (f+g)^p)^(1/p)`
pub fn check_t8(pair: &PositivePair, op: &Operator, x: f64, cfg: &CheckConfig, quad: &QuadratureConfig) -> Result<InequalityCheck> {
    let cx = Ctx::new(op, x, cfg, quad)?;
    let (f, g, p) = (&pair.f, &pair.g, cfg.p);
    let k = c1(pair.m, pair.big_m)?;
    let lhs = cx.norm(|t| f.value(t), p)?.add(cx.norm(|t| g.value(t), p)?);
    let rhs = cx.norm(|t| f.value(t) + g.value(t), p)?.scale(k);
    Ok(cx.finish(InequalityCheck::one_sided(Theorem::T8, lhs, rhs, k, cfg.slack_factor)))
}

/// `c2 (I f^p)^(1/p) (I g^p)^(1/p) <= (I f^p)^(2/p) + (I g^p)^(2/p)`
pub fn check_t9(pair: &PositivePair, op: &Operator, x: f64, cfg: &CheckConfig, quad: &QuadratureConfig) -> Result<InequalityCheck> {
    let cx = Ctx::new(op, x, cfg, quad)?;
    let (f, g, p) = (&pair.f, &pair.g, cfg.p);
    let k = c2(pair.m, pair.big_m)?;
    let nf = cx.norm(|t| f.value(t), p)?;
    let ng = cx.norm(|t| g.value(t), p)?;
    let lhs = nf.mul(ng).scale(k);
    let rhs = nf.powf(2.0).add(ng.powf(2.0));
    Ok(cx.finish(InequalityCheck::one_sided(Theorem::T9, lhs, rhs, k, cfg.slack_factor)))
}

/// `(I f)^(1/p) (I g)^(1/q) <= (M/m)^(1/(pq)) I(f^(1/p) g^(1/q))`.
///
/// `alt_rhs` holds `(M/m)^(1/(pq)) (I(f^(1/p) g^(1/q)))^(1/p)`, the variant with
/// an outer `1/p` power.
pub fn check_t10(pair: &PositivePair, op: &Operator, x: f64, cfg: &CheckConfig, quad: &QuadratureConfig) -> Result<InequalityCheck> {
    let cx = Ctx::new(op, x, cfg, quad)?;
    let (p, q) = conjugate_exponents(cfg, Theorem::T10)?;
    let (f, g) = (&pair.f, &pair.g);
    let k = (pair.big_m / pair.m).powf((p * q).recip());
    let lhs = cx.int(|t| f.value(t))?.powf(p.recip()).mul(cx.int(|t| g.value(t))?.powf(q.recip()));
    let mixed = cx.int(|t| f.value(t).powf(p.recip()) * g.value(t).powf(q.recip()))?;
    let rhs = mixed.scale(k);
    let mut check = InequalityCheck::one_sided(Theorem::T10, lhs, rhs, k, cfg.slack_factor);
    check.alt_rhs = Some(k * mixed.v.powf(p.recip()));
    Ok(cx.finish(check))
}

/// `I(f g) <= c3 I(f^p + g^p) + c4 I(f^q + g^q)`
pub fn check_t11(pair: &PositivePair, op: &Operator, x: f64, cfg: &CheckConfig, quad: &QuadratureConfig) -> Result<InequalityCheck> {
    let cx = Ctx::new(op, x, cfg, quad)?;
    let (p, q) = conjugate_exponents(cfg, Theorem::T11)?;
    let (f, g) = (&pair.f, &pair.g);
    let k3 = c3(p, pair.big_m)?;
    let k4 = if cfg.paper_statement_constants {
        c4_statement(p, q, pair.m)?
    } else {
        c4(q, pair.m)?
    };
    let lhs = cx.int(|t| f.value(t) * g.value(t))?;
    let sp = cx.int(|t| f.value(t).powf(p) + g.value(t).powf(p))?;
    let sq = cx.int(|t| f.value(t).powf(q) + g.value(t).powf(q))?;
    let rhs = sp.scale(k3).add(sq.scale(k4));
    let mut check = InequalityCheck::one_sided(Theorem::T11, lhs, rhs, k3, cfg.slack_factor);
    check.constant_upper = Some(k4);
    Ok(cx.finish(check))
}

/// `(M+1)/(M-c) N(f - cg) <= N(f) + N(g) <= (m+1)/(m-c) N(f - cg)` with
/// `N(h) = (I h^p)^(1/p)` and `0 < c < m`.
pub fn check_t12(pair: &PositivePair, op: &Operator, x: f64, cfg: &CheckConfig, quad: &QuadratureConfig) -> Result<InequalityCheck> {
    let (m, big_m) = (pair.m, pair.big_m);
    let c = cfg.c.unwrap_or(0.5 * m);
    if !(c > 0.0 && c < m) {
        return Err(Error::domain(format!("T12 needs 0 < c < m, got c = {c}, m = {m}")));
    }
    let cx = Ctx::new(op, x, cfg, quad)?;
    let (f, g, p) = (&pair.f, &pair.g, cfg.p);
    let lower = (big_m + 1.0) / (big_m - c);
    let upper = (m + 1.0) / (m - c);
    let diff = cx.norm(|t| f.value(t) - c * g.value(t), p)?;
    let middle = cx.norm(|t| f.value(t), p)?.add(cx.norm(|t| g.value(t), p)?);
    Ok(cx.finish(InequalityCheck::sandwich(
        Theorem::T12,
        diff.scale(lower),
        middle,
        diff.scale(upper),
        lower,
        Some(upper),
        cfg.slack_factor,
    )))
}

/// `N(f) + N(g) <= c5 N(f + g)` for a box-bounded pair.
pub fn check_t13(pair: &PositivePair, op: &Operator, x: f64, cfg: &CheckConfig, quad: &QuadratureConfig) -> Result<InequalityCheck> {
    let bounds = match (pair.kind, pair.bounds) {
        (PairKind::BoxBounded, Some(b)) => b,
        _ => return Err(Error::Config("T13 needs a box-bounded pair".into())),
    };
    let cx = Ctx::new(op, x, cfg, quad)?;
    let (f, g, p) = (&pair.f, &pair.g, cfg.p);
    let k = c5(&bounds)?;
    let lhs = cx.norm(|t| f.value(t), p)?.add(cx.norm(|t| g.value(t), p)?);
    let rhs = cx.norm(|t| f.value(t) + g.value(t), p)?.scale(k);
    Ok(cx.finish(InequalityCheck::one_sided(Theorem::T13, lhs, rhs, k, cfg.slack_factor)))
}

/// `(1/M) I(f g) <= c6 I((f+g)^2) <= (1/m) I(f g)`
pub fn check_t14(pair: &PositivePair, op: &Operator, x: f64, cfg: &CheckConfig, quad: &QuadratureConfig) -> Result<InequalityCheck> {
    let cx = Ctx::new(op, x, cfg, quad)?;
    let (f, g) = (&pair.f, &pair.g);
    let k = c6(pair.m, pair.big_m)?;
    let prod = cx.int(|t| f.value(t) * g.value(t))?;
    let square = cx.int(|t| {
        let s = f.value(t) + g.value(t);
        s * s
    })?;
    Ok(cx.finish(InequalityCheck::sandwich(
        Theorem::T14,
        prod.scale(pair.big_m.recip()),
        square.scale(k),
        prod.scale(pair.m.recip()),
        k,
        None,
        cfg.slack_factor,
    )))
}

/// `N(f) + N(g) <= 2 N(h)`, `h = max{M((M/m + 1) f - M g), ((m + M) g - f)/m}`
pub fn check_t15(pair: &PositivePair, op: &Operator, x: f64, cfg: &CheckConfig, quad: &QuadratureConfig) -> Result<InequalityCheck> {
    let cx = Ctx::new(op, x, cfg, quad)?;
    let (f, g, p) = (&pair.f, &pair.g, cfg.p);
    let (m, big_m) = (pair.m, pair.big_m);
    let h = |t: f64| {
        let (fv, gv) = (f.value(t), g.value(t));
        let first = big_m * ((big_m / m + 1.0) * fv - big_m * gv);
        let second = ((m + big_m) * gv - fv) / m;
        first.max(second)
    };
    let lhs = cx.norm(|t| f.value(t), p)?.add(cx.norm(|t| g.value(t), p)?);
    let rhs = cx.norm(h, p)?.scale(2.0);
    Ok(cx.finish(InequalityCheck::one_sided(Theorem::T15, lhs, rhs, 2.0, cfg.slack_factor)))
}

/// `N(f + g) <= N(f) + N(g)`
pub fn check_forward_minkowski(
    pair: &PositivePair,
    op: &Operator,
    x: f64,
    cfg: &CheckConfig,
    quad: &QuadratureConfig,
) -> Result<InequalityCheck> {
    let cx = Ctx::new(op, x, cfg, quad)?;
    let (f, g, p) = (&pair.f, &pair.g, cfg.p);
    let lhs = cx.norm(|t| f.value(t) + g.value(t), p)?;
    let rhs = cx.norm(|t| f.value(t), p)?.add(cx.norm(|t| g.value(t), p)?);
    Ok(cx.finish(InequalityCheck::one_sided(Theorem::ForwardMinkowski, lhs, rhs, 1.0, cfg.slack_factor)))
}

/// Dispatches to the operator check for `theorem`.
pub fn run_check(
    theorem: Theorem,
    pair: &PositivePair,
    op: &Operator,
    x: f64,
    cfg: &CheckConfig,
    quad: &QuadratureConfig,
) -> Result<InequalityCheck> {
    match theorem {
        Theorem::T8 => check_t8(pair, op, x, cfg, quad),
        Theorem::T9 => check_t9(pair, op, x, cfg, quad),
        Theorem::T10 => check_t10(pair, op, x, cfg, quad),
        Theorem::T11 => check_t11(pair, op, x, cfg, quad),
        Theorem::T12 => check_t12(pair, op, x, cfg, quad),
        Theorem::T13 => check_t13(pair, op, x, cfg, quad),
        Theorem::T14 => check_t14(pair, op, x, cfg, quad),
        Theorem::T15 => check_t15(pair, op, x, cfg, quad),
        Theorem::ForwardMinkowski => check_forward_minkowski(pair, op, x, cfg, quad),
        Theorem::Young | Theorem::PowerMean => {
            Err(Error::Config(format!("{theorem} is a scalar lemma, not an operator check")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{generate_box_pair, generate_ratio_pair, BoxBounds, Expr, Interval, TestFunction};
    use crate::inequality::Verdict;
    use crate::operator::{ClassicalOperator, OperatorParams};

    fn rl(alpha: f64) -> Operator {
        Operator::Generalized(OperatorParams::riemann_liouville(alpha, 0.0))
    }

    fn constant_pair(fc: f64, gc: f64, m: f64, big_m: f64, domain: Interval) -> PositivePair {
        PositivePair {
            f: TestFunction::new(Expr::Const(fc), domain).unwrap(),
            g: TestFunction::new(Expr::Const(gc), domain).unwrap(),
            m,
            big_m,
            kind: PairKind::RatioBounded,
            bounds: None,
            seed: 0,
        }
    }

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn t8_equality_and_random() {
        let d = Interval::new(0.0, 1.5).unwrap();
        let pair = generate_ratio_pair(5, 1.0, 1.0, d, 3).unwrap();
        let c = check_t8(&pair, &rl(0.5), 1.5, &CheckConfig::default(), &quad()).unwrap();
        assert!(c.satisfied && c.margin.abs() <= 1e-10, "{c:?}");

        let pair = generate_ratio_pair(1, 0.5, 2.0, d, 3).unwrap();
        let cfg = CheckConfig::default().with_p(3.0);
        let c = check_t8(&pair, &rl(1.0), 1.5, &cfg, &quad()).unwrap();
        assert!(c.satisfied && c.margin > 0.0, "{c:?}");
    }

    #[test]
    fn t8_p1_ratio_is_c1() {
        let d = Interval::new(0.0, 2.0).unwrap();
        let pair = generate_ratio_pair(8, 0.5, 2.0, d, 2).unwrap();
        let c = check_t8(&pair, &rl(0.7), 2.0, &CheckConfig::default().with_p(1.0), &quad()).unwrap();
        assert!(c.satisfied);
        assert!((c.rhs / c.lhs - c.constant).abs() < 1e-9, "{c:?}");
        assert!(c.constant >= 1.0);
    }

    #[test]
    fn t9_constant_pair_arithmetic() {
        // f = 2, g = 1, RL order 1 on [0, 1]: I f = 2, I g = 1, c2 = 3*3/2 - 2 = 2.5
        let d = Interval::new(0.0, 1.0).unwrap();
        let pair = constant_pair(2.0, 1.0, 2.0, 2.0, d);
        let c = check_t9(&pair, &rl(1.0), 1.0, &CheckConfig::default().with_p(1.0), &quad()).unwrap();
        assert!((c.lhs - 5.0).abs() < 1e-12 && (c.rhs - 5.0).abs() < 1e-12, "{c:?}");
        assert!(c.satisfied);
    }

    #[test]
    fn t10_constant_pair_and_alt_form() {
        let d = Interval::new(0.0, 1.0).unwrap();
        let pair = constant_pair(2.0, 1.0, 2.0, 2.0, d);
        let c = check_t10(&pair, &rl(1.0), 1.0, &CheckConfig::default(), &quad()).unwrap();
        // lhs = 2^(1/2), rhs = I(2^(1/2)) = 2^(1/2)
        assert!((c.lhs - 2f64.sqrt()).abs() < 1e-12 && (c.rhs - 2f64.sqrt()).abs() < 1e-12, "{c:?}");
        assert!(c.satisfied);
        assert!(c.alt_rhs.is_some());
        assert!(check_t10(&pair, &rl(1.0), 1.0, &CheckConfig::default().with_p(1.0), &quad()).is_err());
    }

    #[test]
    fn t11_unit_constants() {
        let d = Interval::new(0.0, 1.0).unwrap();
        let pair = constant_pair(1.0, 1.0, 1.0, 1.0, d);
        let c = check_t11(&pair, &rl(1.0), 1.0, &CheckConfig::default(), &quad()).unwrap();
        // c3 = c4 = 1/4: rhs = 1/4 * 2 + 1/4 * 2 = 1
        assert!((c.lhs - 1.0).abs() < 1e-12 && (c.rhs - 1.0).abs() < 1e-12, "{c:?}");
        assert!(c.satisfied);
    }

    #[test]
    fn t12_coinciding_bounds() {
        let d = Interval::new(0.0, 1.0).unwrap();
        let pair = constant_pair(2.0, 1.0, 2.0, 2.0, d);
        let cfg = CheckConfig {
            c: Some(1.0),
            ..CheckConfig::default()
        };
        let c = check_t12(&pair, &rl(1.0), 1.0, &cfg, &quad()).unwrap();
        let mid = c.middle.unwrap();
        assert!((c.lhs - 3.0).abs() < 1e-12 && (mid - 3.0).abs() < 1e-12 && (c.rhs - 3.0).abs() < 1e-12);
        let bad = CheckConfig {
            c: Some(2.0),
            ..CheckConfig::default()
        };
        assert!(matches!(check_t12(&pair, &rl(1.0), 1.0, &bad, &quad()), Err(Error::Domain(_))));
    }

    #[test]
    fn t13_constant_box_is_tight() {
        let d = Interval::new(1.0, 2.0).unwrap();
        let b = BoxBounds { a_lo: 2.0, a_hi: 2.0, b_lo: 3.0, b_hi: 3.0 };
        let pair = generate_box_pair(1, b, d, 2).unwrap();
        let op = Operator::Classical(ClassicalOperator::Hadamard { alpha: 0.5, a: 1.0 });
        let c = check_t13(&pair, &op, 2.0, &CheckConfig::default(), &quad()).unwrap();
        assert!(c.satisfied && c.margin.abs() < 1e-12, "{c:?}");
        let ratio = generate_ratio_pair(1, 0.5, 2.0, d, 2).unwrap();
        assert!(check_t13(&ratio, &op, 2.0, &CheckConfig::default(), &quad()).is_err());
    }

    #[test]
    fn t14_and_t15_equality() {
        let d = Interval::new(0.0, 1.3).unwrap();
        let pair = generate_ratio_pair(17, 1.0, 1.0, d, 3).unwrap();
        let op = Operator::Generalized(OperatorParams::katugampola(0.5, 2.0, 0.0));
        for th in [Theorem::T9, Theorem::T14, Theorem::T15, Theorem::ForwardMinkowski] {
            let c = run_check(th, &pair, &op, 1.3, &CheckConfig::default(), &quad()).unwrap();
            assert!(c.satisfied && c.margin.abs() <= 1e-10, "{th}: {c:?}");
        }
    }

    #[test]
    fn t15_constant_arithmetic() {
        // f = 3, g = 2, m = M = 1.5: h = max{1.5(2*3 - 3), (6 - 3)/1.5} = 4.5
        let d = Interval::new(0.0, 1.0).unwrap();
        let pair = constant_pair(3.0, 2.0, 1.5, 1.5, d);
        let c = check_t15(&pair, &rl(1.0), 1.0, &CheckConfig::default().with_p(1.0), &quad()).unwrap();
        assert!((c.lhs - 5.0).abs() < 1e-12 && (c.rhs - 9.0).abs() < 1e-12, "{c:?}");
    }

    #[test]
    fn stalled_quadrature_is_inconclusive() {
        let d = Interval::new(0.0, 1.5).unwrap();
        let pair = generate_ratio_pair(1, 0.5, 2.0, d, 3).unwrap();
        let starved = QuadratureConfig {
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            max_subdivisions: 1,
        };
        let c = check_t8(&pair, &rl(0.5), 1.5, &CheckConfig::default(), &starved).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(!c.satisfied);
    }
}
