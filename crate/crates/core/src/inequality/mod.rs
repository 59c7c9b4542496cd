//! Numerical certification of reverse Minkowski-type inequalities.
//!
//! Every check evaluates both sides through the operator, carries the
//! quadrature error estimates through the arithmetic, and compares with a
//! slack of `slack_factor * (sum of side errors)`.

mod checks;
mod estimate;
mod suite;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::BoxBounds;

pub use checks::{
    check_forward_minkowski, check_t10, check_t11, check_t12, check_t13, check_t14, check_t15, check_t8, check_t9,
    run_check,
};
pub use estimate::Est;
pub use suite::{
    default_operator_grid, replay_trial, run_suite, SuiteConfig, SuiteReport, TheoremSummary, TrialRecord,
    INCONCLUSIVE_THRESHOLD,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
    T14,
    T15,
    #[serde(rename = "forward-minkowski")]
    ForwardMinkowski,
    #[serde(rename = "young")]
    Young,
    #[serde(rename = "power-mean")]
    PowerMean,
}

impl Theorem {
    /// The operator inequalities, in order.
    pub const OPERATOR: [Theorem; 8] = [
        Theorem::T8,
        Theorem::T9,
        Theorem::T10,
        Theorem::T11,
        Theorem::T12,
        Theorem::T13,
        Theorem::T14,
        Theorem::T15,
    ];

    /// Whether the check needs conjugate exponents, i.e. `p > 1`.
    pub fn needs_conjugate(&self) -> bool {
        matches!(self, Theorem::T10 | Theorem::T11)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Theorem::T8 => "T8",
            Theorem::T9 => "T9",
            Theorem::T10 => "T10",
            Theorem::T11 => "T11",
            Theorem::T12 => "T12",
            Theorem::T13 => "T13",
            Theorem::T14 => "T14",
            Theorem::T15 => "T15",
            Theorem::ForwardMinkowski => "forward-minkowski",
            Theorem::Young => "young",
            Theorem::PowerMean => "power-mean",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    /// Accepts `8`..`15`, `T8`..`T15` and the lemma names.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().trim_start_matches(['T', 't']);
        let th = match key {
            "8" => Theorem::T8,
            "9" => Theorem::T9,
            "10" => Theorem::T10,
            "11" => Theorem::T11,
            "12" => Theorem::T12,
            "13" => Theorem::T13,
            "14" => Theorem::T14,
            "15" => Theorem::T15,
            _ => match s.trim() {
                "forward-minkowski" => Theorem::ForwardMinkowski,
                "young" => Theorem::Young,
                "power-mean" => Theorem::PowerMean,
                other => return Err(Error::Config(format!("unknown theorem `{other}`"))),
            },
        };
        Ok(th)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Satisfied,
    Violated,
    /// A quadrature did not converge; the check is neither passed nor failed.
    Inconclusive,
}

/// Exponent and tolerance settings shared by the operator checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub p: f64,
    /// Parameter of the T12 sandwich, `0 < c < m`; `None` means `m / 2`.
    pub c: Option<f64>,
    pub slack_factor: f64,
    /// Use the printed `2^(p-1)` in `c4` instead of `2^(q-1)`.
    pub paper_statement_constants: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            p: 2.0,
            c: None,
            slack_factor: 2.0,
            paper_statement_constants: false,
        }
    }
}

impl CheckConfig {
    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    /// Conjugate exponent; `inf` at `p = 1`.
    pub fn q(&self) -> f64 {
        conjugate(self.p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::Config(format!("p must be finite and at least 1, got {}", self.p)));
        }
        if !(self.slack_factor >= 0.0 && self.slack_factor.is_finite()) {
            return Err(Error::Config(format!("slack factor must be non-negative, got {}", self.slack_factor)));
        }
        Ok(())
    }
}

pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// Outcome of one inequality check.
///
/// One-sided checks compare `lhs <= rhs`. Sandwich checks (T12, T14) also set
/// `middle` and require `lhs <= middle <= rhs`. `margin` is the smallest
/// relative gap `(upper - lower) / max(|upper|, |lower|)` over the comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub theorem: Theorem,
    pub lhs: f64,
    pub rhs: f64,
    pub middle: Option<f64>,
    pub constant: f64,
    pub constant_upper: Option<f64>,
    pub lhs_err: f64,
    pub rhs_err: f64,
    pub middle_err: Option<f64>,
    pub slack: f64,
    pub satisfied: bool,
    pub verdict: Verdict,
    pub margin: f64,
    /// Right-hand side of an alternative reading of the inequality, when one exists.
    pub alt_rhs: Option<f64>,
}

fn relative_gap(lower: f64, upper: f64) -> f64 {
    let scale = lower.abs().max(upper.abs());
    if scale == 0.0 {
        0.0
    } else {
        (upper - lower) / scale
    }
}

impl InequalityCheck {
    pub(crate) fn one_sided(theorem: Theorem, lhs: Est, rhs: Est, constant: f64, slack_factor: f64) -> Self {
        let slack = slack_factor * (lhs.e + rhs.e);
        let satisfied = lhs.v <= rhs.v + slack;
        Self {
            theorem,
            lhs: lhs.v,
            rhs: rhs.v,
            middle: None,
            constant,
            constant_upper: None,
            lhs_err: lhs.e,
            rhs_err: rhs.e,
            middle_err: None,
            slack,
            satisfied,
            verdict: if satisfied { Verdict::Satisfied } else { Verdict::Violated },
            margin: relative_gap(lhs.v, rhs.v),
            alt_rhs: None,
        }
    }

    pub(crate) fn sandwich(
        theorem: Theorem,
        lhs: Est,
        middle: Est,
        rhs: Est,
        constant: f64,
        constant_upper: Option<f64>,
        slack_factor: f64,
    ) -> Self {
        let slack = slack_factor * (lhs.e + middle.e + rhs.e);
        let satisfied = lhs.v <= middle.v + slack && middle.v <= rhs.v + slack;
        Self {
            theorem,
            lhs: lhs.v,
            rhs: rhs.v,
            middle: Some(middle.v),
            constant,
            constant_upper,
            lhs_err: lhs.e,
            rhs_err: rhs.e,
            middle_err: Some(middle.e),
            slack,
            satisfied,
            verdict: if satisfied { Verdict::Satisfied } else { Verdict::Violated },
            margin: relative_gap(lhs.v, middle.v).min(relative_gap(middle.v, rhs.v)),
            alt_rhs: None,
        }
    }

    pub(crate) fn mark_inconclusive(mut self) -> Self {
        self.satisfied = false;
        self.verdict = Verdict::Inconclusive;
        self
    }
}

fn require_ratio(m: f64, big_m: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite() && big_m.is_finite() && m <= big_m) {
        return Err(Error::domain(format!("need 0 < m <= M, got m = {m}, M = {big_m}")));
    }
    Ok(())
}

/// `(M(m+1) + (M+1)) / ((m+1)(M+1))`
pub fn c1(m: f64, big_m: f64) -> Result<f64> {
    require_ratio(m, big_m)?;
    Ok((big_m * (m + 1.0) + (big_m + 1.0)) / ((m + 1.0) * (big_m + 1.0)))
}

/// `(M+1)(m+1)/M - 2`
pub fn c2(m: f64, big_m: f64) -> Result<f64> {
    require_ratio(m, big_m)?;
    Ok((big_m + 1.0) * (m + 1.0) / big_m - 2.0)
}

/// `2^(p-1) M^p / (p (M+1)^p)`
pub fn c3(p: f64, big_m: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite() && big_m > 0.0 && big_m.is_finite()) {
        return Err(Error::domain(format!("c3 needs p > 1 and M > 0, got p = {p}, M = {big_m}")));
    }
    Ok(2f64.powf(p - 1.0) * (big_m / (big_m + 1.0)).powf(p) / p)
}

/// `2^(q-1) / (q (m+1)^q)`
pub fn c4(q: f64, m: f64) -> Result<f64> {
    c4_with_power(q, q, m)
}

/// The printed variant `2^(p-1) / (q (m+1)^q)`.
pub fn c4_statement(p: f64, q: f64, m: f64) -> Result<f64> {
    c4_with_power(p, q, m)
}

fn c4_with_power(power: f64, q: f64, m: f64) -> Result<f64> {
    if !(q > 1.0 && q.is_finite() && m > 0.0 && m.is_finite() && power.is_finite()) {
        return Err(Error::domain(format!("c4 needs q > 1 and m > 0, got q = {q}, m = {m}")));
    }
    Ok(2f64.powf(power - 1.0) / (q * (m + 1.0).powf(q)))
}

/// `(A(a+B) + B(A+b)) / ((A+b)(a+B))`
pub fn c5(b: &BoxBounds) -> Result<f64> {
    let BoxBounds { a_lo, a_hi, b_lo, b_hi } = *b;
    let ok = [a_lo, a_hi, b_lo, b_hi].iter().all(|v| *v > 0.0 && v.is_finite()) && a_lo <= a_hi && b_lo <= b_hi;
    if !ok {
        return Err(Error::domain(format!("c5 needs positive ordered boxes, got {b:?}")));
    }
    Ok((a_hi * (a_lo + b_hi) + b_hi * (a_hi + b_lo)) / ((a_hi + b_lo) * (a_lo + b_hi)))
}

/// `1 / ((m+1)(M+1))`
pub fn c6(m: f64, big_m: f64) -> Result<f64> {
    require_ratio(m, big_m)?;
    Ok(1.0 / ((m + 1.0) * (big_m + 1.0)))
}

const ROUND: f64 = 4.0 * f64::EPSILON;

/// Relative rounding error of `x^y` when `y` itself carries rounding error.
fn pow_cond(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        1.0 + (y * x.ln()).abs()
    }
}

/// `a b <= a^p/p + b^q/q` for `a, b >= 0`, `p > 1`, with a rounding budget.
pub fn young_check(a: f64, b: f64, p: f64) -> Result<InequalityCheck> {
    if !(p > 1.0 && p.is_finite() && a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!("Young's inequality needs a, b >= 0 and p > 1, got a={a}, b={b}, p={p}")));
    }
    let q = conjugate(p);
    let lhs = a * b;
    let (ta, tb) = (a.powf(p) / p, b.powf(q) / q);
    let rhs = ta + tb;
    let budget = ROUND * (lhs + ta * pow_cond(a, p) + tb * pow_cond(b, q));
    let lhs = Est { v: lhs, e: 0.0 };
    let rhs = Est { v: rhs, e: budget };
    Ok(InequalityCheck::one_sided(Theorem::Young, lhs, rhs, 1.0, 1.0))
}

/// `(a+b)^r <= 2^(r-1) (a^r + b^r)` for `a, b >= 0`, `r >= 1`, with a rounding budget.
pub fn power_mean_check(a: f64, b: f64, r: f64) -> Result<InequalityCheck> {
    if !(r >= 1.0 && r.is_finite() && a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!("power-mean bound needs a, b >= 0 and r >= 1, got a={a}, b={b}, r={r}")));
    }
    let k = 2f64.powf(r - 1.0);
    let lhs = (a + b).powf(r);
    let (ar, br) = (a.powf(r), b.powf(r));
    let rhs = k * (ar + br);
    let lhs_e = ROUND * lhs * pow_cond(a + b, r);
    let rhs_e = ROUND * k * (ar * pow_cond(a, r) + br * pow_cond(b, r) + (ar + br) * pow_cond(2.0, r));
    Ok(InequalityCheck::one_sided(
        Theorem::PowerMean,
        Est { v: lhs, e: lhs_e },
        Est { v: rhs, e: rhs_e },
        k,
        1.0,
    ))
}

/// Young's inequality with exponent `r` and the power-mean bound with exponent
/// `r`, both at `(a, b)`.
pub fn check_scalar_lemmas(r: f64, a: f64, b: f64) -> Result<bool> {
    Ok(young_check(a, b, r)?.satisfied && power_mean_check(a, b, r)?.satisfied)
}
