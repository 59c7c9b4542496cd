use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

use super::{kronrod, tanh_sinh, IntegralResult, QuadratureConfig, Scheme};

#[derive(Debug, Clone, Copy)]
pub(super) struct Segment {
    pub c: f64,
    pub d: f64,
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Max-heap on error; ties broken by position so the order is total and
    // the subdivision sequence is reproducible.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.c.total_cmp(&self.c))
    }
}

fn apply(f: &dyn Fn(f64, f64) -> f64, scheme: Scheme, c: f64, d: f64, cfg: &QuadratureConfig) -> Result<Segment> {
    match scheme {
        Scheme::TanhSinh => tanh_sinh::segment(f, c, d, cfg.abs_tol * (d - c), cfg.rel_tol),
        Scheme::GaussKronrod => kronrod::segment(f, c, d),
    }
}

/// Global adaptive bisection: always split the segment with the largest error
/// estimate until the summed error meets the tolerance.
pub(super) fn integrate(f: &dyn Fn(f64, f64) -> f64, scheme: Scheme, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    let first = apply(f, scheme, 0.0, 1.0, cfg)?;
    let mut evaluations = first.evals;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        let current = IntegralResult {
            value,
            error_estimate: error,
            evaluations,
        };
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Ok(current);
        }
        if heap.len() >= cfg.max_subdivisions {
            return Err(Error::NonConvergence {
                best: current,
                subdivisions: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.c + worst.d);
        if !(mid > worst.c && mid < worst.d) {
            heap.push(worst);
            return Err(Error::NonConvergence {
                best: current,
                subdivisions: heap.len(),
            });
        }
        let left = apply(f, scheme, worst.c, mid, cfg)?;
        let right = apply(f, scheme, mid, worst.d, cfg)?;
        evaluations += left.evals + right.evals;
        heap.push(left);
        heap.push(right);
    }
}
