//! Seeded construction of pairs `(f, g)` with certified ratio or box bounds.
//!
//! `g = exp(P)` with `P` bounded by 2 in absolute value on the domain. Bounded
//! shapes are `lo + (hi - lo) s(t)` where
//! `s = λ sin²(w t + φ) + (1 - λ) logistic(Q(t))` lies in `[0, 1]` for any
//! coefficients, so the bounds hold by construction; the grid check only guards
//! against rounding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Expr, Interval, TestFunction};

/// Largest accepted polynomial degree for generated shapes.
pub const MAX_COMPLEXITY: u32 = 8;
const CHECK_GRID: usize = 1000;
const CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKind {
    RatioBounded,
    BoxBounded,
}

/// `a_lo <= f <= a_hi`, `b_lo <= g <= b_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxBounds {
    pub a_lo: f64,
    pub a_hi: f64,
    pub b_lo: f64,
    pub b_hi: f64,
}

/// Two positive functions with `m <= f/g <= M` on the shared domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivePair {
    pub f: TestFunction,
    pub g: TestFunction,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub kind: PairKind,
    pub bounds: Option<BoxBounds>,
    pub seed: u64,
}

impl PositivePair {
    pub fn domain(&self) -> Interval {
        self.f.domain
    }
}

fn check_band(lo: f64, hi: f64, what: &str) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidBounds(format!("{what} bounds must be finite")));
    }
    if lo <= 0.0 {
        return Err(Error::InvalidBounds(format!("{what} lower bound must be positive, got {lo}")));
    }
    if lo > hi {
        return Err(Error::InvalidBounds(format!("{what} lower bound {lo} exceeds upper bound {hi}")));
    }
    Ok(())
}

fn check_inputs(domain: &Interval, complexity: u32) -> Result<()> {
    if !domain.is_finite() {
        return Err(Error::InvalidBounds(format!("generation needs a finite domain, got {domain}")));
    }
    if complexity > MAX_COMPLEXITY {
        return Err(Error::Config(format!("complexity must be at most {MAX_COMPLEXITY}, got {complexity}")));
    }
    Ok(())
}

/// Coefficients in `t` of `Σ d_k ((t - c)/h)^k`.
fn shift_to_t(d: &[f64], c: f64, h: f64) -> Vec<f64> {
    let mut out = vec![0.0; d.len()];
    for (k, &dk) in d.iter().enumerate() {
        let scale = dk / h.powi(k as i32);
        let mut binom = 1.0;
        for j in 0..=k {
            // C(k, j) t^j (-c)^(k-j)
            out[j] += scale * binom * (-c).powi((k - j) as i32);
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
    }
    out
}

/// Random polynomial in normalized `z in [-1, 1]` with `|value| <= amp`.
fn bounded_poly(rng: &mut ChaCha8Rng, degree: u32, amp: f64, domain: &Interval) -> Vec<f64> {
    let mut d: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let total: f64 = d.iter().map(|v| v.abs()).sum();
    if total > 0.0 {
        let shrink = amp / total;
        d.iter_mut().for_each(|v| *v *= shrink);
    }
    let c = 0.5 * (domain.lo + domain.hi);
    let h = 0.5 * (domain.hi - domain.lo);
    shift_to_t(&d, c, h)
}

/// `lo + (hi - lo) s(t)` with a seeded `s` mapping into `[0, 1]`.
fn banded(rng: &mut ChaCha8Rng, lo: f64, hi: f64, degree: u32, domain: &Interval) -> Expr {
    if lo == hi {
        return Expr::Const(lo);
    }
    let width = domain.hi - domain.lo;
    let w = rng.gen_range(0.5..=3.0) / width;
    let phi = rng.gen_range(0.0..std::f64::consts::PI);
    let lambda: f64 = rng.gen_range(0.0..=1.0);
    let q = bounded_poly(rng, degree, 3.0, domain);
    let span = hi - lo;
    Expr::Sum(vec![
        Expr::SinPos {
            w,
            phi,
            lo,
            hi: lo + span * lambda,
        },
        Expr::Product(vec![Expr::Const(span * (1.0 - lambda)), Expr::Logistic(q)]),
    ])
}

fn grid_check(expr: &Expr, domain: &Interval, lo: f64, hi: f64, what: &str) -> Result<()> {
    let slack = CHECK_TOL * hi.abs().max(lo.abs());
    for t in domain.grid(CHECK_GRID) {
        let v = expr.value(t);
        if !(v >= lo - slack && v <= hi + slack) {
            return Err(Error::domain(format!("{what} = {v} at t = {t} escapes [{lo}, {hi}]")));
        }
    }
    Ok(())
}

/// Pair with `m <= f/g <= M` on `domain`: `g = exp(P)`, `f = r g`,
/// `r = m + (M - m) s`. `complexity` is the degree of the random polynomials.
pub fn generate_ratio_pair(seed: u64, m: f64, big_m: f64, domain: Interval, complexity: u32) -> Result<PositivePair> {
    check_band(m, big_m, "ratio")?;
    check_inputs(&domain, complexity)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g_expr = Expr::ExpPoly(bounded_poly(&mut rng, complexity, 2.0, &domain));
    let r_expr = banded(&mut rng, m, big_m, complexity, &domain);
    let f_expr = Expr::Product(vec![r_expr, g_expr.clone()]);

    let slack = CHECK_TOL * big_m;
    for t in domain.grid(CHECK_GRID) {
        let ratio = f_expr.value(t) / g_expr.value(t);
        if !(ratio >= m - slack && ratio <= big_m + slack) {
            return Err(Error::domain(format!("ratio {ratio} at t = {t} escapes [{m}, {big_m}]")));
        }
    }
    Ok(PositivePair {
        f: TestFunction::new(f_expr, domain)?,
        g: TestFunction::new(g_expr, domain)?,
        m,
        big_m,
        kind: PairKind::RatioBounded,
        bounds: None,
        seed,
    })
}

/// Pair with `a_lo <= f <= a_hi`, `b_lo <= g <= b_hi`; the induced ratio bounds
/// are `a_lo / b_hi` and `a_hi / b_lo`.
pub fn generate_box_pair(seed: u64, bounds: BoxBounds, domain: Interval, complexity: u32) -> Result<PositivePair> {
    let BoxBounds { a_lo, a_hi, b_lo, b_hi } = bounds;
    check_band(a_lo, a_hi, "f box")?;
    check_band(b_lo, b_hi, "g box")?;
    check_inputs(&domain, complexity)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f_expr = banded(&mut rng, a_lo, a_hi, complexity, &domain);
    let g_expr = banded(&mut rng, b_lo, b_hi, complexity, &domain);
    grid_check(&f_expr, &domain, a_lo, a_hi, "f")?;
    grid_check(&g_expr, &domain, b_lo, b_hi, "g")?;
    Ok(PositivePair {
        f: TestFunction::new(f_expr, domain)?,
        g: TestFunction::new(g_expr, domain)?,
        m: a_lo / b_hi,
        big_m: a_hi / b_lo,
        kind: PairKind::BoxBounded,
        bounds: Some(bounds),
        seed,
    })
}
