use crate::quadrature::IntegralResult;

const ROUND: f64 = 4.0 * f64::EPSILON;

/// A value with an absolute error bound, propagated to first order plus a
/// rounding term of a few ulps per operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Est {
    pub v: f64,
    pub e: f64,
}

impl Est {
    pub fn exact(v: f64) -> Self {
        Self { v, e: 0.0 }
    }

    pub fn add(self, o: Est) -> Est {
        let v = self.v + o.v;
        Est {
            v,
            e: self.e + o.e + ROUND * v.abs(),
        }
    }

    pub fn scale(self, k: f64) -> Est {
        let v = self.v * k;
        Est {
            v,
            e: self.e * k.abs() + ROUND * v.abs(),
        }
    }

    pub fn mul(self, o: Est) -> Est {
        let v = self.v * o.v;
        Est {
            v,
            e: self.v.abs() * o.e + o.v.abs() * self.e + self.e * o.e + ROUND * v.abs(),
        }
    }

    /// `v^r` for `v >= 0`; the error is the wider side of the image of
    /// `[v - e, v + e] ∩ [0, inf)`.
    pub fn powf(self, r: f64) -> Est {
        let v = self.v.max(0.0).powf(r);
        let lo = (self.v - self.e).max(0.0).powf(r);
        let hi = (self.v + self.e).max(0.0).powf(r);
        Est {
            v,
            e: (hi - v).abs().max((v - lo).abs()) + ROUND * v.abs(),
        }
    }
}

impl From<IntegralResult> for Est {
    fn from(r: IntegralResult) -> Self {
        Est {
            v: r.value,
            e: r.error_estimate,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_covers_perturbation() {
        let a = Est { v: 2.0, e: 1e-6 };
        let b = Est { v: 3.0, e: 2e-6 };
        let p = a.mul(b);
        assert!((2.0f64 + 1e-6) * (3.0 + 2e-6) - 6.0 <= p.e);
        let r = a.powf(0.5);
        assert!(((2.0f64 - 1e-6).sqrt() - r.v).abs() <= r.e);
        let s = a.add(b).scale(-2.0);
        assert_eq!(s.v, -10.0);
        assert!(s.e >= 6e-6);
    }

    #[test]
    fn power_of_interval_touching_zero() {
        let a = Est { v: 1e-8, e: 1e-7 };
        let r = a.powf(2.0);
        assert!(r.e >= 0.999 * ((1.1e-7f64).powi(2) - r.v));
    }
}
