//! The integral factor of the generalized operator.
//!
//! Left side, with `w = t^rho` and `w = a^rho + (x^rho - a^rho) u`:
//!
//! ```text
//! ∫_a^x t^(rho(eta+1)-1) (x^rho - t^rho)^(alpha-1) f(t) dt
//!     = D^alpha / rho · ∫_0^1 w^eta (1-u)^(alpha-1) f(w^(1/rho)) du,   D = x^rho - a^rho
//! ```
//!
//! The singular factor `(1-u)^(alpha-1)` ends up at a fixed endpoint of the unit
//! interval. `D` and `t(u)` are formed through `expm1`/`ln_1p` so that small
//! `rho` (the Hadamard limit) does not cancel catastrophically.

use crate::error::{Error, Result};
use crate::function::TestFunction;
use crate::operator::{OperatorParams, Side};
use crate::special::{beta_fn, gamma_fn};

use super::{integrate_unit, IntegralResult, QuadratureConfig, Scheme};

/// Unit-interval integral together with the log of the factor that turns it
/// into the kernel integral.
pub(crate) struct KernelFactor {
    pub ln_scale: f64,
    pub unit: IntegralResult,
}

fn positive_ln(v: f64, what: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v.ln())
    } else {
        Err(Error::domain(format!("{what} is not a positive finite number ({v})")))
    }
}

pub(crate) fn kernel_factor<F>(f: F, params: &OperatorParams, x: f64, cfg: &QuadratureConfig) -> Result<KernelFactor>
where
    F: Fn(f64) -> f64,
{
    params.validate()?;
    params.check_point(x)?;
    cfg.validate()?;
    match params.side {
        Side::Left => left_factor(f, params, x, cfg),
        Side::Right => right_factor(f, params, x, cfg),
    }
}

fn left_factor<F>(f: F, p: &OperatorParams, x: f64, cfg: &QuadratureConfig) -> Result<KernelFactor>
where
    F: Fn(f64) -> f64,
{
    let (alpha, rho, eta, a) = (p.alpha, p.rho, p.eta, p.lower);
    let am1 = alpha - 1.0;
    let inv_rho = rho.recip();
    if a == 0.0 {
        let ln_scale = (alpha + eta) * rho * x.ln() - rho.ln();
        let scheme = if alpha < 1.0 || eta < 0.0 { Scheme::TanhSinh } else { Scheme::GaussKronrod };
        let unit = integrate_unit(
            |u, omu| {
                let t = (x * u.powf(inv_rho)).min(x);
                u.powf(eta) * omu.powf(am1) * f(t)
            },
            scheme,
            cfg,
        )?;
        return Ok(KernelFactor { ln_scale, unit });
    }

    let ratio = (x / a).ln() * rho;
    let r = ratio.exp_m1();
    let ln_r = positive_ln(r, "x^rho/a^rho - 1")?;
    let ln_a_rho = rho * a.ln();
    let ln_scale = eta * ln_a_rho + alpha * (ln_a_rho + ln_r) - rho.ln();
    let scheme = if alpha < 1.0 { Scheme::TanhSinh } else { Scheme::GaussKronrod };
    let unit = integrate_unit(
        |u, omu| {
            let l = (r * u).ln_1p();
            let t = (a * (l * inv_rho).exp()).clamp(a, x);
            (eta * l).exp() * omu.powf(am1) * f(t)
        },
        scheme,
        cfg,
    )?;
    Ok(KernelFactor { ln_scale, unit })
}

/// Right side: `∫_x^b t^(kappa+rho-1) (t^rho - x^rho)^(alpha-1) f(t) dt`
/// with `t^rho = x^rho (1 + r u)`, `r = (b/x)^rho - 1`.
fn right_factor<F>(f: F, p: &OperatorParams, x: f64, cfg: &QuadratureConfig) -> Result<KernelFactor>
where
    F: Fn(f64) -> f64,
{
    let b = p
        .upper
        .ok_or_else(|| Error::domain("right-sided operator needs a finite upper endpoint b"))?;
    let (alpha, rho, kappa) = (p.alpha, p.rho, p.kappa);
    let am1 = alpha - 1.0;
    let inv_rho = rho.recip();
    let r = ((b / x).ln() * rho).exp_m1();
    let ln_r = positive_ln(r, "b^rho/x^rho - 1")?;
    let ln_x = x.ln();
    let ln_scale = alpha * (rho * ln_x + ln_r) - rho.ln() + kappa * ln_x;
    let power = kappa * inv_rho;
    let scheme = if alpha < 1.0 { Scheme::TanhSinh } else { Scheme::GaussKronrod };
    let unit = integrate_unit(
        |u, _| {
            let l = (r * u).ln_1p();
            let t = (x * (l * inv_rho).exp()).clamp(x, b);
            (power * l).exp() * u.powf(am1) * f(t)
        },
        scheme,
        cfg,
    )?;
    Ok(KernelFactor { ln_scale, unit })
}

/// The integral factor of the operator (everything except `rho^(1-beta) x^kappa / Γ(alpha)`
/// on the left, or `rho^(1-beta) x^(rho eta) / Γ(alpha)` on the right).
pub fn integrate_kernel(f: &TestFunction, params: &OperatorParams, x: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    integrate_kernel_with(|t| f.value(t), params, x, cfg)
}

pub fn integrate_kernel_with<F>(f: F, params: &OperatorParams, x: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    let k = kernel_factor(f, params, x, cfg)?;
    Ok(k.unit.scaled(k.ln_scale.exp()))
}

/// Exact value of the left-sided operator applied to `t^sigma` with `a = 0`:
///
/// `rho^(-beta) x^(kappa + rho(eta+alpha) + sigma) B(eta + sigma/rho + 1, alpha) / Γ(alpha)`.
pub fn closed_form_monomial(params: &OperatorParams, sigma: f64, x: f64) -> Result<f64> {
    params.validate()?;
    if params.side != Side::Left {
        return Err(Error::domain("closed form is only available for the left-sided operator"));
    }
    if params.lower != 0.0 {
        return Err(Error::domain("closed form requires lower bound a = 0"));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("evaluation point must be positive, got {x}")));
    }
    let (alpha, rho, eta) = (params.alpha, params.rho, params.eta);
    let first = eta + sigma / rho + 1.0;
    if !(first > 0.0) {
        return Err(Error::domain(format!(
            "eta + sigma/rho + 1 must be positive for an integrable monomial, got {first}"
        )));
    }
    let exponent = params.kappa + rho * (eta + alpha) + sigma;
    Ok(rho.powf(-params.beta) * x.powf(exponent) * beta_fn(first, alpha)? / gamma_fn(alpha)?)
}
