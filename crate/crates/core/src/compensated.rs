//! Double-double arithmetic for the oscillating phase `2 E t`.
//!
//! A plain product loses a few ulps of a phase that can reach O(10²), and
//! near an echo zero that loss is amplified by the inverse of the factor.

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> DoubleDouble {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    DoubleDouble { hi: s, lo: err }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> DoubleDouble {
    let s = a + b;
    DoubleDouble { hi: s, lo: b - (s - a) }
}

#[inline]
fn two_prod(a: f64, b: f64) -> DoubleDouble {
    let p = a * b;
    DoubleDouble { hi: p, lo: a.mul_add(b, -p) }
}

impl DoubleDouble {
    pub(crate) fn from_f64(v: f64) -> Self {
        DoubleDouble { hi: v, lo: 0.0 }
    }

    pub(crate) fn product(a: f64, b: f64) -> Self {
        two_prod(a, b)
    }

    pub(crate) fn add(self, other: Self) -> Self {
        let s = two_sum(self.hi, other.hi);
        let t = two_sum(self.lo, other.lo);
        let s = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(s.hi, s.lo + t.lo)
    }

    pub(crate) fn mul(self, other: Self) -> Self {
        let p = two_prod(self.hi, other.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * other.lo + self.lo * other.hi))
    }

    pub(crate) fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble::from_f64(0.0);
        }
        let s = self.hi.sqrt();
        let sq = two_prod(s, s);
        let r = ((self.hi - sq.hi) - sq.lo + self.lo) / (2.0 * s);
        quick_two_sum(s, r)
    }

    /// `(sin² x, cos² x)` with the low word folded in to first order.
    pub(crate) fn sin_cos_squared(self) -> (f64, f64) {
        let (s, c) = self.hi.sin_cos();
        let sin = s + c * self.lo;
        let cos = c - s * self.lo;
        (sin * sin, cos * cos)
    }
}
