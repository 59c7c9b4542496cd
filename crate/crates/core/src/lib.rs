//! Generalized fractional integrals with five parameters `(alpha, beta, rho, eta, kappa)`,
//! their classical special cases, and numerical certification of reverse
//! Minkowski-type inequalities for them.
//!
//! ```
//! use genfrac::{evaluate_with, OperatorParams, QuadratureConfig};
//!
//! // Riemann–Liouville integral of order 1 of f = 1 on [0, 2] is 2.
//! let p = OperatorParams::riemann_liouville(1.0, 0.0);
//! let r = evaluate_with(|_| 1.0, &p, 2.0, &QuadratureConfig::default()).unwrap();
//! assert!((r.value - 2.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod function;
pub mod inequality;
pub mod operator;
pub mod quadrature;
pub mod special;

pub use error::{Error, ParamError, Result};
pub use function::{Expr, Interval, PositivePair, TestFunction};
pub use operator::{evaluate, evaluate_with, ClassicalKind, ClassicalOperator, Operator, OperatorParams, Side};
pub use quadrature::{closed_form_monomial, IntegralResult, QuadratureConfig};
pub use special::{beta_fn, gamma_fn, ln_beta, ln_gamma};
