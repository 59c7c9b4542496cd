//! Classical fractional integrals evaluated from their own definitions.
//!
//! None of these go through the generalized substitution, so they serve as an
//! independent cross-check of it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::TestFunction;
use crate::quadrature::{integrate_unit, IntegralResult, QuadratureConfig, Scheme};
use crate::special::{gamma_fn, ln_gamma};

use super::{reduce_to_classical, ClassicalKind, OperatorParams, Side};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassicalOperator {
    /// `1/Γ(α) ∫_a^x (x-t)^(α-1) f(t) dt`
    RiemannLiouville { alpha: f64, a: f64 },
    /// `1/Γ(α) ∫_a^x (ln(x/t))^(α-1) f(t) dt/t`, `a > 0`
    Hadamard { alpha: f64, a: f64 },
    /// `σ x^(-σ(α+η)) / Γ(α) ∫_a^x t^(σ(η+1)-1) (x^σ - t^σ)^(α-1) f(t) dt`
    ErdelyiKober { alpha: f64, sigma: f64, eta: f64, a: f64 },
    /// `ρ^(1-α) / Γ(α) ∫_a^x t^(ρ-1) (x^ρ - t^ρ)^(α-1) f(t) dt`
    Katugampola { alpha: f64, rho: f64, a: f64 },
    /// `1/Γ(α) ∫_-inf^x (x-t)^(α-1) f(t) dt`
    Weyl { alpha: f64 },
    /// `1/Γ(α) ∫_x^inf (t-x)^(α-1) f(t) dt`
    Liouville { alpha: f64 },
}

/// Exponential envelope of `f` away from `x`: for `s >= S`,
/// `|f(x ∓ s)| <= |f(x ∓ S)| exp(-rate (s - S))`, `rate > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailDecay {
    pub rate: f64,
}

impl ClassicalOperator {
    pub fn kind(&self) -> ClassicalKind {
        match self {
            ClassicalOperator::RiemannLiouville { .. } => ClassicalKind::RiemannLiouville,
            ClassicalOperator::Hadamard { .. } => ClassicalKind::Hadamard,
            ClassicalOperator::ErdelyiKober { .. } => ClassicalKind::ErdelyiKober,
            ClassicalOperator::Katugampola { .. } => ClassicalKind::Katugampola,
            ClassicalOperator::Weyl { .. } => ClassicalKind::Weyl,
            ClassicalOperator::Liouville { .. } => ClassicalKind::Liouville,
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            ClassicalOperator::RiemannLiouville { alpha, .. }
            | ClassicalOperator::Hadamard { alpha, .. }
            | ClassicalOperator::ErdelyiKober { alpha, .. }
            | ClassicalOperator::Katugampola { alpha, .. }
            | ClassicalOperator::Weyl { alpha }
            | ClassicalOperator::Liouville { alpha } => alpha,
        }
    }

    /// Left end of the integration range (`-inf` for Weyl; for Liouville the
    /// range starts at `x`, reported as `0`).
    pub fn lower(&self) -> f64 {
        match *self {
            ClassicalOperator::RiemannLiouville { a, .. }
            | ClassicalOperator::Hadamard { a, .. }
            | ClassicalOperator::ErdelyiKober { a, .. }
            | ClassicalOperator::Katugampola { a, .. } => a,
            ClassicalOperator::Weyl { .. } => f64::NEG_INFINITY,
            ClassicalOperator::Liouville { .. } => 0.0,
        }
    }

    /// Direct classical form of a left-sided (or Liouville) parameterization,
    /// if it reduces to one.
    pub fn from_params(params: &OperatorParams, tol: f64) -> Option<Self> {
        let p = params;
        let left = p.side == Side::Left;
        match reduce_to_classical(p, tol) {
            ClassicalKind::RiemannLiouville if left => Some(Self::RiemannLiouville { alpha: p.alpha, a: p.lower }),
            ClassicalKind::Katugampola if left => Some(Self::Katugampola {
                alpha: p.alpha,
                rho: p.rho,
                a: p.lower,
            }),
            ClassicalKind::ErdelyiKober if left => Some(Self::ErdelyiKober {
                alpha: p.alpha,
                sigma: p.rho,
                eta: p.eta,
                a: p.lower,
            }),
            ClassicalKind::Weyl => Some(Self::Weyl { alpha: p.alpha }),
            ClassicalKind::Liouville => Some(Self::Liouville { alpha: p.alpha }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let alpha = self.alpha();
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be positive and finite, got {alpha}")));
        }
        let finite_nonneg = |a: f64| a.is_finite() && a >= 0.0;
        match *self {
            ClassicalOperator::RiemannLiouville { a, .. } if !a.is_finite() => {
                Err(Error::Config("Riemann-Liouville lower bound must be finite".into()))
            }
            ClassicalOperator::Hadamard { a, .. } if !(a > 0.0 && a.is_finite()) => {
                Err(Error::Config(format!("Hadamard lower bound must be positive, got {a}")))
            }
            ClassicalOperator::Katugampola { rho, a, .. } if !(rho > 0.0 && rho.is_finite() && finite_nonneg(a)) => {
                Err(Error::Config("Katugampola needs rho > 0 and a >= 0".into()))
            }
            ClassicalOperator::ErdelyiKober { sigma, eta, a, .. } => {
                if !(sigma > 0.0 && sigma.is_finite() && eta.is_finite() && finite_nonneg(a)) {
                    return Err(Error::Config("Erdelyi-Kober needs sigma > 0, finite eta, a >= 0".into()));
                }
                if a == 0.0 && eta <= -1.0 {
                    return Err(Error::Config("Erdelyi-Kober with a = 0 needs eta > -1".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        let kind = self.kind();
        match *self {
            ClassicalOperator::RiemannLiouville { alpha, a } | ClassicalOperator::Hadamard { alpha, a } => {
                format!("{kind}[alpha={alpha};a={a}]")
            }
            ClassicalOperator::ErdelyiKober { alpha, sigma, eta, a } => {
                format!("{kind}[alpha={alpha};sigma={sigma};eta={eta};a={a}]")
            }
            ClassicalOperator::Katugampola { alpha, rho, a } => format!("{kind}[alpha={alpha};rho={rho};a={a}]"),
            ClassicalOperator::Weyl { alpha } | ClassicalOperator::Liouville { alpha } => {
                format!("{kind}[alpha={alpha}]")
            }
        }
    }
}

/// Evaluates a classical operator on a test function. Weyl and Liouville need
/// an exponential envelope, which is available for `expoly` functions of degree 1.
pub fn evaluate_classical(
    op: &ClassicalOperator,
    f: &TestFunction,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let decay = f.exp_rate().and_then(|c| {
        let rate = match op {
            ClassicalOperator::Weyl { .. } => c,
            _ => -c,
        };
        (rate > 0.0).then_some(TailDecay { rate })
    });
    evaluate_classical_with(op, |t| f.value(t), decay, x, cfg)
}

pub fn evaluate_classical_with<F>(
    op: &ClassicalOperator,
    f: F,
    decay: Option<TailDecay>,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    op.validate()?;
    cfg.validate()?;
    if !x.is_finite() {
        return Err(Error::domain("evaluation point must be finite"));
    }
    let alpha = op.alpha();
    match *op {
        ClassicalOperator::RiemannLiouville { a, .. } => {
            require_above(x, a)?;
            riemann_liouville(&f, alpha, x, x - a, a, cfg)
        }
        ClassicalOperator::Hadamard { a, .. } => {
            require_above(x, a)?;
            hadamard(&f, alpha, a, x, cfg)
        }
        ClassicalOperator::Katugampola { rho, a, .. } => {
            require_above(x, a)?;
            let ln_pre = (1.0 - alpha) * rho.ln() - ln_gamma(alpha)?;
            power_kernel(&f, alpha, rho, rho - 1.0, a, x, ln_pre, cfg)
        }
        ClassicalOperator::ErdelyiKober { sigma, eta, a, .. } => {
            require_above(x, a)?;
            let ln_pre = sigma.ln() - sigma * (alpha + eta) * x.ln() - ln_gamma(alpha)?;
            power_kernel(&f, alpha, sigma, sigma * (eta + 1.0) - 1.0, a, x, ln_pre, cfg)
        }
        ClassicalOperator::Weyl { .. } => half_line(&f, alpha, x, -1.0, decay, cfg),
        ClassicalOperator::Liouville { .. } => half_line(&f, alpha, x, 1.0, decay, cfg),
    }
}

fn require_above(x: f64, a: f64) -> Result<()> {
    if x > a {
        Ok(())
    } else {
        Err(Error::domain(format!("evaluation point {x} must exceed the lower bound {a}")))
    }
}

fn scheme_for(alpha: f64) -> Scheme {
    if alpha < 1.0 {
        Scheme::TanhSinh
    } else {
        Scheme::GaussKronrod
    }
}

/// `len^α/Γ(α) ∫_0^1 v^(α-1) f(x - len v) dv`; `far` is `x - len` exactly.
fn riemann_liouville<F>(f: &F, alpha: f64, x: f64, len: f64, far: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    let am1 = alpha - 1.0;
    let unit = integrate_unit(
        |v, omv| {
            let t = if v <= 0.5 { x - len * v } else { far + len * omv };
            v.powf(am1) * f(t)
        },
        scheme_for(alpha),
        cfg,
    )?;
    Ok(unit.scaled((alpha * len.ln() - ln_gamma(alpha)?).exp()))
}

/// With `t = x e^(-L v)`, `L = ln(x/a)`: `L^α/Γ(α) ∫_0^1 v^(α-1) f(t) dv`.
fn hadamard<F>(f: &F, alpha: f64, a: f64, x: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    let big_l = (x / a).ln();
    let am1 = alpha - 1.0;
    let unit = integrate_unit(
        |v, _| v.powf(am1) * f((x * (-big_l * v).exp()).clamp(a, x)),
        scheme_for(alpha),
        cfg,
    )?;
    Ok(unit.scaled((alpha * big_l.ln() - ln_gamma(alpha)?).exp()))
}

/// `exp(ln_pre) ∫_a^x t^e (x^ρ - t^ρ)^(α-1) f(t) dt` on the raw variable,
/// `t = x - (x - a) v`.
#[allow(clippy::too_many_arguments)]
fn power_kernel<F>(
    f: &F,
    alpha: f64,
    rho: f64,
    e: f64,
    a: f64,
    x: f64,
    ln_pre: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    let len = x - a;
    let am1 = alpha - 1.0;
    let ln_x = x.ln();
    let unit = integrate_unit(
        |v, omv| {
            let s = len * v;
            let t = if v <= 0.5 { x - s } else { a + len * omv };
            let q = t / x;
            // 1 - (t/x)^ρ, accurate both for t near x and t near 0
            let gap = if q < 0.5 { -(rho * q.ln()).exp_m1() } else { -(rho * (-s / x).ln_1p()).exp_m1() };
            let ln_w = e * t.ln() + am1 * (rho * ln_x + gap.ln());
            ln_w.exp() * f(t)
        },
        Scheme::TanhSinh,
        cfg,
    )?;
    Ok(unit.scaled((ln_pre + len.ln()).exp()))
}

/// Bound on `1/Γ(α) ∫_S^inf s^(α-1) |f(x ∓ s)| ds` given `|f(x ∓ S)| = f_s` and
/// exponential decay at `rate` beyond `S`.
fn tail_bound(alpha: f64, f_s: f64, rate: f64, s: f64) -> Result<f64> {
    let raw = if alpha <= 1.0 {
        f_s * s.powf(alpha - 1.0) / rate
    } else {
        // (S + y)^(α-1) <= 2^max(α-2,0) (S^(α-1) + y^(α-1))
        let c = 2f64.powf((alpha - 2.0).max(0.0));
        f_s * c * (s.powf(alpha - 1.0) / rate + gamma_fn(alpha)? / rate.powf(alpha))
    };
    Ok(raw / gamma_fn(alpha)?)
}

/// Weyl (`dir = -1`) or Liouville (`dir = +1`): truncates the half line at `S`
/// where the tail bound falls below a tenth of the absolute tolerance, and adds
/// that bound to the error estimate.
fn half_line<F>(f: &F, alpha: f64, x: f64, dir: f64, decay: Option<TailDecay>, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    let decay = decay.ok_or_else(|| {
        Error::domain("infinite-range operator needs a function with a known exponential decay")
    })?;
    if !(decay.rate > 0.0 && decay.rate.is_finite()) {
        return Err(Error::domain("decay rate must be positive"));
    }
    let mut s = 1.0;
    let tail = loop {
        let bound = tail_bound(alpha, f(x + dir * s).abs(), decay.rate, s)?;
        if bound <= 0.1 * cfg.abs_tol {
            break bound;
        }
        s *= 2.0;
        if s > 1e6 {
            return Err(Error::domain("tail does not fall below tolerance within 1e6"));
        }
    };
    let am1 = alpha - 1.0;
    let unit = integrate_unit(|v, _| v.powf(am1) * f(x + dir * s * v), scheme_for(alpha), cfg)?;
    let body = unit.scaled((alpha * s.ln() - ln_gamma(alpha)?).exp());
    Ok(IntegralResult {
        value: body.value,
        error_estimate: body.error_estimate + tail,
        evaluations: body.evaluations,
    })
}
