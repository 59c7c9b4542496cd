//! Error-controlled integration on the unit interval.
//!
//! Every operator evaluation in this crate is normalised to an integral over
//! `u in [0, 1]` whose integrand is handed both `u` and `1 - u`. The complement
//! is computed from the node construction itself, never as `1.0 - u`, so weights
//! such as `(1 - u)^(alpha - 1)` keep full relative precision right up to the
//! endpoint. No rule ever samples an endpoint.

mod adaptive;
mod kernel;
mod kronrod;
mod tanh_sinh;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use kernel::{closed_form_monomial, integrate_kernel, integrate_kernel_with};

pub(crate) use kernel::kernel_factor;

/// Tolerances and work limit for one integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Config(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Config(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }
}

/// Value of an integral together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl IntegralResult {
    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            evaluations: self.evaluations,
        }
    }
}

/// Which segment rule the adaptive driver uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Scheme {
    /// Double-exponential rule; tolerates integrable algebraic endpoint singularities.
    TanhSinh,
    /// 7/15-point Gauss–Kronrod; for integrands bounded on the closed interval.
    GaussKronrod,
}

/// Integrates `f(u, 1 - u)` over `[0, 1]`.
pub(crate) fn integrate_unit<F>(f: F, scheme: Scheme, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64, f64) -> f64,
{
    cfg.validate()?;
    adaptive::integrate(&f, scheme, cfg)
}

/// Integrates `f` over the finite interval `[a, b]` with the endpoint-robust rule.
///
/// Endpoint singularities of the form `|t - a|^s` or `|b - t|^s` with `s > -1`
/// are handled; the endpoints themselves are never evaluated.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(IntegralResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 1,
        });
    }
    let len = b - a;
    let res = integrate_unit(
        |u, omu| {
            let t = if u <= 0.5 { a + len * u } else { b - len * omu };
            f(t)
        },
        Scheme::TanhSinh,
        cfg,
    )?;
    Ok(res.scaled(len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        let bad = QuadratureConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig {
            max_subdivisions: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn smooth_integral_both_schemes() {
        let cfg = QuadratureConfig::default();
        for scheme in [Scheme::TanhSinh, Scheme::GaussKronrod] {
            let r = integrate_unit(|u, _| (3.0 * u).exp(), scheme, &cfg).unwrap();
            let exact = ((3.0_f64).exp() - 1.0) / 3.0;
            assert!((r.value - exact).abs() < 1e-12 * exact, "{scheme:?}: {r:?}");
            assert!(r.error_estimate >= (r.value - exact).abs() / 10.0);
            assert!(r.evaluations >= 1);
        }
    }

    #[test]
    fn weakly_singular_endpoint() {
        let cfg = QuadratureConfig::default();
        // ∫ (1-u)^(-0.7) du = 1/0.3
        let r = integrate_unit(|_, omu| omu.powf(-0.7), Scheme::TanhSinh, &cfg).unwrap();
        assert!((r.value - 1.0 / 0.3).abs() < 1e-11, "{r:?}");
        // ∫ u^(-0.5) (1-u)^(-0.5) du = π
        let r = integrate_unit(|u, omu| (u * omu).powf(-0.5), Scheme::TanhSinh, &cfg).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-11, "{r:?}");
    }

    #[test]
    fn interior_kink_needs_subdivision() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|t: f64| (t - 0.3).abs(), 0.0, 1.0, &cfg).unwrap();
        let exact = 0.5 * 0.3 * 0.3 + 0.5 * 0.7 * 0.7;
        assert!((r.value - exact).abs() < 1e-10, "{r:?}");
        let r = integrate_unit(|u, _| (u - 0.3).abs(), Scheme::GaussKronrod, &cfg).unwrap();
        assert!((r.value - exact).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let cfg = QuadratureConfig {
            rel_tol: 1e-14,
            abs_tol: 1e-300,
            max_subdivisions: 2,
        };
        let err = integrate(|t: f64| (t - 0.123_456).abs().sqrt(), 0.0, 1.0, &cfg).unwrap_err();
        match err {
            Error::NonConvergence { best, subdivisions } => {
                assert!(best.value.is_finite());
                assert!(subdivisions >= 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_a_domain_error() {
        let cfg = QuadratureConfig::default();
        let err = integrate_unit(|_, _| f64::NAN, Scheme::GaussKronrod, &cfg).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
