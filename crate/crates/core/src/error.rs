use thiserror::Error;

use crate::quadrature::IntegralResult;

/// A rejected operator parameterization. Each variant names the violated condition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("alpha must be positive")]
    AlphaNotPositive,
    #[error("rho must be positive")]
    RhoNotPositive,
    #[error("lower bound a must be non-negative")]
    LowerNegative,
    #[error("rho(eta+1) must be positive when a=0")]
    LowerEndpointNotIntegrable,
    #[error("upper bound b must exceed x for the right-sided operator")]
    UpperNotAboveX,
    #[error("evaluation point x must exceed the lower bound a")]
    PointNotAboveLower,
    #[error("evaluation point x must be positive for the right-sided operator")]
    PointNotPositive,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid operator parameters: {0}")]
    Params(#[from] ParamError),

    #[error("quadrature did not converge after {subdivisions} subdivisions (best estimate {best:?})")]
    NonConvergence {
        best: IntegralResult,
        subdivisions: usize,
    },

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("cannot parse function spec at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("t = {t} lies outside the function domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
