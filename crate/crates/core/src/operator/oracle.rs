//! Quadrature against the monomial closed form over a fixed parameter grid.

use serde::Serialize;

use crate::error::Result;
use crate::quadrature::{closed_form_monomial, QuadratureConfig};

use super::{evaluate_with, OperatorParams};

/// One grid point: operator parameters (with `a = 0`) and monomial exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OraclePoint {
    pub params: OperatorParams,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub x: f64,
    pub points: usize,
    pub max_rel_error: f64,
    pub worst: OraclePoint,
}

/// 540 points: α ∈ {0.3, 0.5, 1, 1.7, 2.5}, ρ ∈ {0.5, 1, 2}, η ∈ {0, 0.5, 1},
/// κ ∈ {0, 1}, β ∈ {0, α}, σ ∈ {0, 1, 2}.
pub fn oracle_grid() -> Vec<OraclePoint> {
    let mut out = Vec::with_capacity(540);
    for alpha in [0.3, 0.5, 1.0, 1.7, 2.5] {
        for rho in [0.5, 1.0, 2.0] {
            for eta in [0.0, 0.5, 1.0] {
                for kappa in [0.0, 1.0] {
                    for beta in [0.0, alpha] {
                        for sigma in [0.0, 1.0, 2.0] {
                            out.push(OraclePoint {
                                params: OperatorParams::left(alpha, beta, rho, eta, kappa, 0.0),
                                sigma,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Largest relative deviation of the quadrature from the closed form at `x`.
pub fn oracle_sweep(x: f64, cfg: &QuadratureConfig) -> Result<OracleReport> {
    let grid = oracle_grid();
    let mut max_rel = 0.0;
    let mut worst = grid[0];
    for pt in &grid {
        let exact = closed_form_monomial(&pt.params, pt.sigma, x)?;
        let sigma = pt.sigma;
        let got = evaluate_with(|t| t.powf(sigma), &pt.params, x, cfg)?.value;
        let rel = ((got - exact) / exact).abs();
        if !(rel <= max_rel) {
            max_rel = rel;
            worst = *pt;
        }
    }
    Ok(OracleReport {
        x,
        points: grid.len(),
        max_rel_error: max_rel,
        worst,
    })
}
