use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

use super::adaptive::Segment;

/// Largest abscissa parameter. At t = 5.9 the node distance to the endpoint
/// is ~1e-249, still a normal double, so `(1 - u)^s` stays finite for the
/// singular exponents we meet.
const T_MAX: f64 = 5.9;
const MIN_LEVEL: u32 = 3;
const MAX_LEVEL: u32 = 7;
const NEGLIGIBLE: f64 = 1e-20;

/// Node at abscissa parameter `t >= 0`: returns (weight, distance of the node
/// from the nearer endpoint on the reference interval [-1, 1]).
#[inline]
fn node(t: f64) -> (f64, f64) {
    let y = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * y).exp();
    let comp = 2.0 * e / (1.0 + e);
    let w = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    (w, comp)
}

struct Evaluator<'a> {
    f: &'a dyn Fn(f64, f64) -> f64,
    c: f64,
    d: f64,
    half: f64,
    evals: usize,
}

impl Evaluator<'_> {
    fn sample(&mut self, u: f64, omu: f64) -> Result<f64> {
        self.evals += 1;
        let v = (self.f)(u, omu);
        if !v.is_finite() {
            return Err(Error::domain(format!("integrand is not finite at u = {u:e}")));
        }
        Ok(v)
    }

    fn left(&mut self, dist: f64) -> Result<Option<f64>> {
        let off = self.half * dist;
        if off <= 0.0 {
            return Ok(None);
        }
        let u = self.c + off;
        let omu = if self.d == 1.0 && u > 0.5 { (self.d - self.c) - off } else { 1.0 - u };
        self.sample(u, omu).map(Some)
    }

    fn right(&mut self, dist: f64) -> Result<Option<f64>> {
        let off = self.half * dist;
        if off <= 0.0 {
            return Ok(None);
        }
        let u = self.d - off;
        let omu = if self.d == 1.0 { off } else { 1.0 - u };
        self.sample(u, omu).map(Some)
    }

    fn center(&mut self) -> Result<f64> {
        let u = self.c + self.half;
        let omu = if self.d == 1.0 { self.half } else { 1.0 - u };
        self.sample(u, omu)
    }
}

/// Sums weighted samples at t = start, start + step, ... on both sides,
/// stopping each side once its terms become negligible against `scale`.
fn sweep(ev: &mut Evaluator<'_>, start: f64, step: f64, scale: f64, abs_acc: &mut f64) -> Result<f64> {
    let mut sum = 0.0;
    let (mut left_live, mut right_live) = (true, true);
    let mut t = start;
    while t <= T_MAX && (left_live || right_live) {
        let (w, dist) = node(t);
        if left_live {
            match ev.left(dist)? {
                Some(v) => {
                    let term = w * v;
                    sum += term;
                    *abs_acc += term.abs();
                    if t > 1.0 && term.abs() <= NEGLIGIBLE * scale {
                        left_live = false;
                    }
                }
                None => left_live = false,
            }
        }
        if right_live {
            match ev.right(dist)? {
                Some(v) => {
                    let term = w * v;
                    sum += term;
                    *abs_acc += term.abs();
                    if t > 1.0 && term.abs() <= NEGLIGIBLE * scale {
                        right_live = false;
                    }
                }
                None => right_live = false,
            }
        }
        t += step;
    }
    Ok(sum)
}

/// Tanh–sinh estimate of the integral over `[c, d]`, refining the step until
/// consecutive levels agree or `MAX_LEVEL` is reached. The error estimate is the
/// difference of the last two levels, floored at the rounding level.
pub(super) fn segment(
    f: &dyn Fn(f64, f64) -> f64,
    c: f64,
    d: f64,
    abs_target: f64,
    rel_tol: f64,
) -> Result<Segment> {
    let half = 0.5 * (d - c);
    let mut ev = Evaluator { f, c, d, half, evals: 0 };

    let mut abs_acc = 0.0;
    let center = ev.center()?;
    let mut raw = FRAC_PI_2 * center;
    abs_acc += raw.abs();
    let scale0 = raw.abs().max(f64::MIN_POSITIVE);
    raw += sweep(&mut ev, 1.0, 1.0, scale0, &mut abs_acc)?;

    let mut h = 1.0;
    let mut prev = raw * h * half;
    let mut err = f64::INFINITY;
    let mut estimate = prev;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let scale = raw.abs().max(f64::MIN_POSITIVE);
        raw += sweep(&mut ev, h, 2.0 * h, scale, &mut abs_acc)?;
        estimate = raw * h * half;
        err = (estimate - prev).abs();
        prev = estimate;
        if level >= MIN_LEVEL && err <= 0.5 * abs_target.max(rel_tol * estimate.abs()) {
            break;
        }
    }
    let rounding = 64.0 * f64::EPSILON * abs_acc * h * half.abs();
    Ok(Segment {
        c,
        d,
        value: estimate,
        error: err.max(rounding),
        evals: ev.evals,
    })
}
