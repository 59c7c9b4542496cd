//! The five-parameter fractional integral and its classical special cases.
//!
//! Left-sided operator on `[a, x]`:
//!
//! ```text
//! rho^(1-beta) x^kappa / Γ(alpha) · ∫_a^x t^(rho(eta+1)-1) / (x^rho - t^rho)^(1-alpha) f(t) dt
//! ```
//!
//! Right-sided operator on `[x, b]`:
//!
//! ```text
//! rho^(1-beta) x^(rho eta) / Γ(alpha) · ∫_x^b t^(kappa+rho-1) / (t^rho - x^rho)^(1-alpha) f(t) dt
//! ```

mod classical;
mod oracle;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParamError, Result};
use crate::function::TestFunction;
use crate::quadrature::{kernel_factor, IntegralResult, QuadratureConfig};
use crate::special::ln_gamma;

pub use classical::{evaluate_classical, evaluate_classical_with, ClassicalOperator, TailDecay};
pub use oracle::{oracle_grid, oracle_sweep, OraclePoint, OracleReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::Config(format!("side must be `left` or `right`, got `{other}`"))),
        }
    }
}

/// Parameters `(alpha, beta, rho, eta, kappa)` plus the interval endpoint and side.
///
/// `lower` is the endpoint `a` of the left-sided operator; `upper` is `b` for the
/// right-sided one (`None` meaning `+inf`, which only the classifier accepts).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub eta: f64,
    pub kappa: f64,
    pub lower: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    pub side: Side,
}

impl OperatorParams {
    pub fn left(alpha: f64, beta: f64, rho: f64, eta: f64, kappa: f64, lower: f64) -> Self {
        Self {
            alpha,
            beta,
            rho,
            eta,
            kappa,
            lower,
            upper: None,
            side: Side::Left,
        }
    }

    /// `beta = alpha, rho = 1, eta = kappa = 0`.
    pub fn riemann_liouville(alpha: f64, lower: f64) -> Self {
        Self::left(alpha, alpha, 1.0, 0.0, 0.0, lower)
    }

    /// `beta = alpha, eta = kappa = 0`.
    pub fn katugampola(alpha: f64, rho: f64, lower: f64) -> Self {
        Self::left(alpha, alpha, rho, 0.0, 0.0, lower)
    }

    /// `beta = 0, kappa = -rho(alpha + eta)`, with `rho` playing the role of `sigma`.
    pub fn erdelyi_kober(alpha: f64, sigma: f64, eta: f64, lower: f64) -> Self {
        Self::left(alpha, 0.0, sigma, eta, -sigma * (alpha + eta), lower)
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn with_upper(mut self, upper: f64) -> Self {
        self.upper = Some(upper);
        self
    }

    /// Accepts the parameters iff the operator integral can exist.
    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("rho", self.rho),
            ("eta", self.eta),
            ("kappa", self.kappa),
        ] {
            if !v.is_finite() {
                return Err(ParamError::NonFinite(name));
            }
        }
        if self.alpha <= 0.0 {
            return Err(ParamError::AlphaNotPositive);
        }
        if self.rho <= 0.0 {
            return Err(ParamError::RhoNotPositive);
        }
        match self.side {
            Side::Left => {
                if self.lower.is_nan() || self.lower == f64::INFINITY {
                    return Err(ParamError::NonFinite("a"));
                }
                if self.lower < 0.0 {
                    return Err(ParamError::LowerNegative);
                }
                if self.lower == 0.0 && self.rho * (self.eta + 1.0) <= 0.0 {
                    return Err(ParamError::LowerEndpointNotIntegrable);
                }
            }
            Side::Right => match self.upper {
                Some(b) if b.is_finite() => {}
                _ => return Err(ParamError::NonFinite("b")),
            },
        }
        Ok(())
    }

    /// Checks that `x` is an admissible evaluation point.
    pub fn check_point(&self, x: f64) -> Result<(), ParamError> {
        if !x.is_finite() {
            return Err(ParamError::NonFinite("x"));
        }
        match self.side {
            Side::Left if x <= self.lower => Err(ParamError::PointNotAboveLower),
            Side::Right if x <= 0.0 => Err(ParamError::PointNotPositive),
            Side::Right if self.upper.is_some_and(|b| b <= x) => Err(ParamError::UpperNotAboveX),
            _ => Ok(()),
        }
    }

    fn ln_prefactor(&self, x: f64) -> Result<f64> {
        let ln_x = x.ln();
        let weight = match self.side {
            Side::Left => self.kappa * ln_x,
            Side::Right => self.rho * self.eta * ln_x,
        };
        Ok((1.0 - self.beta) * self.rho.ln() + weight - ln_gamma(self.alpha)?)
    }
}

impl fmt::Display for OperatorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} rho={} eta={} kappa={} a={}",
            self.alpha, self.beta, self.rho, self.eta, self.kappa, self.lower
        )?;
        if let Some(b) = self.upper {
            write!(f, " b={b}")?;
        }
        if self.side == Side::Right {
            write!(f, " side=right")?;
        }
        Ok(())
    }
}

/// Which classical fractional integral a parameterization reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalKind {
    RiemannLiouville,
    Hadamard,
    ErdelyiKober,
    Katugampola,
    Weyl,
    Liouville,
    Generalized,
}

impl ClassicalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassicalKind::RiemannLiouville => "riemann-liouville",
            ClassicalKind::Hadamard => "hadamard",
            ClassicalKind::ErdelyiKober => "erdelyi-kober",
            ClassicalKind::Katugampola => "katugampola",
            ClassicalKind::Weyl => "weyl",
            ClassicalKind::Liouville => "liouville",
            ClassicalKind::Generalized => "generalized",
        }
    }
}

impl fmt::Display for ClassicalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies a parameterization. Total: anything not matching a classical
/// pattern is `Generalized`.
///
/// `rho = 1, eta = kappa = 0` is the Riemann–Liouville form (beta is immaterial
/// there since `rho^(1-beta) = 1`); on a left side starting at `-inf` it is the
/// Weyl integral, on a right side extending to `+inf` the Liouville integral.
/// Hadamard only arises as `rho -> 0+` and is reported by
/// [`hadamard_limit_advisory`] instead.
pub fn reduce_to_classical(params: &OperatorParams, tol: f64) -> ClassicalKind {
    let near = |v: f64, target: f64| (v - target).abs() <= tol;
    let p = params;
    let rl_form = near(p.kappa, 0.0) && near(p.eta, 0.0) && near(p.rho, 1.0);
    if rl_form {
        return match p.side {
            Side::Left if p.lower == f64::NEG_INFINITY => ClassicalKind::Weyl,
            Side::Right if p.upper.is_none_or(|b| b == f64::INFINITY) => ClassicalKind::Liouville,
            _ => ClassicalKind::RiemannLiouville,
        };
    }
    if near(p.beta, p.alpha) && near(p.kappa, 0.0) && near(p.eta, 0.0) {
        return ClassicalKind::Katugampola;
    }
    if near(p.beta, 0.0) && near(p.kappa + p.rho * (p.alpha + p.eta), 0.0) {
        return ClassicalKind::ErdelyiKober;
    }
    ClassicalKind::Generalized
}

/// True when the parameters sit on the Hadamard approach path
/// (`beta = alpha, kappa = eta = 0`) with `0 < rho <= tol_limit`.
pub fn hadamard_limit_advisory(params: &OperatorParams, tol: f64, tol_limit: f64) -> bool {
    let near = |v: f64, target: f64| (v - target).abs() <= tol;
    params.rho > 0.0
        && params.rho <= tol_limit
        && near(params.beta, params.alpha)
        && near(params.kappa, 0.0)
        && near(params.eta, 0.0)
}

/// Evaluates the generalized operator at `x`.
pub fn evaluate(params: &OperatorParams, f: &TestFunction, x: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    evaluate_with(|t| f.value(t), params, x, cfg)
}

pub fn evaluate_with<F>(f: F, params: &OperatorParams, x: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    let k = kernel_factor(f, params, x, cfg)?;
    let factor = (params.ln_prefactor(x)? + k.ln_scale).exp();
    Ok(k.unit.scaled(factor))
}

/// An operator the inequality checks can be run against: either the
/// generalized form or a directly evaluated classical one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Operator {
    Generalized(OperatorParams),
    Classical(ClassicalOperator),
}

impl Operator {
    pub fn apply<F>(&self, f: F, x: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
    where
        F: Fn(f64) -> f64,
    {
        match self {
            Operator::Generalized(p) => evaluate_with(f, p, x, cfg),
            Operator::Classical(c) => evaluate_classical_with(c, f, None, x, cfg),
        }
    }

    /// Left endpoint of the integration interval.
    pub fn lower(&self) -> f64 {
        match self {
            Operator::Generalized(p) => p.lower,
            Operator::Classical(c) => c.lower(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Operator::Generalized(p) => {
                if p.side != Side::Left {
                    return Err(Error::Config("inequality checks use the left-sided operator only".into()));
                }
                p.validate().map_err(Error::from)
            }
            Operator::Classical(c) => {
                if !c.lower().is_finite() {
                    return Err(Error::Config("inequality checks need a finite lower endpoint".into()));
                }
                c.validate()
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Operator::Generalized(p) => {
                let kind = reduce_to_classical(p, 1e-12);
                format!(
                    "{kind}[alpha={};beta={};rho={};eta={};kappa={};a={}]",
                    p.alpha, p.beta, p.rho, p.eta, p.kappa, p.lower
                )
            }
            Operator::Classical(c) => c.label(),
        }
    }
}
