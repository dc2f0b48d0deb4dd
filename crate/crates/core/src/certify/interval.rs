//! Closed intervals with outward rounding.
//!
//! Directed rounding is emulated in round-to-nearest arithmetic with
//! error-free transformations: the exact rounding error of `a + b`, `a · b`,
//! `a / b` and `√a` is recovered (TwoSum or an fma residual) and the result
//! is stepped by one ulp only when the error points outward. Exact results
//! stay exact, so identities such as `0 · x = 0` or `x² − 3 ≥ 0` for
//! `x ≥ √3` survive. Near the underflow threshold the residuals are no longer
//! exact and every result is stepped unconditionally.
//!
//! `exp` trusts the platform libm to within one ulp and widens by two.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Below this magnitude fma residuals may be inexact.
const TINY: f64 = 1e-290;

pub(crate) mod round {
    use super::TINY;

    #[inline]
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    #[inline]
    pub fn add_down(a: f64, b: f64) -> f64 {
        let (s, e) = two_sum(a, b);
        if s == f64::INFINITY && a.is_finite() && b.is_finite() {
            f64::MAX
        } else if e < 0.0 {
            s.next_down()
        } else {
            s
        }
    }

    #[inline]
    pub fn add_up(a: f64, b: f64) -> f64 {
        let (s, e) = two_sum(a, b);
        if s == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            f64::MIN
        } else if e > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_down(a: f64, b: f64) -> f64 {
        add_down(a, -b)
    }

    #[inline]
    pub fn sub_up(a: f64, b: f64) -> f64 {
        add_up(a, -b)
    }

    /// Sign of `exact(a·b) − fl(a·b)`, or `None` when it can't be trusted.
    #[inline]
    fn mul_err(a: f64, b: f64, p: f64) -> Option<f64> {
        if a == 0.0 || b == 0.0 {
            Some(0.0)
        } else if p.abs() < TINY || !p.is_finite() {
            None
        } else {
            Some(a.mul_add(b, -p))
        }
    }

    #[inline]
    pub fn mul_down(a: f64, b: f64) -> f64 {
        let p = a * b;
        match mul_err(a, b, p) {
            Some(e) if e >= 0.0 => p,
            _ => p.next_down(),
        }
    }

    #[inline]
    pub fn mul_up(a: f64, b: f64) -> f64 {
        let p = a * b;
        match mul_err(a, b, p) {
            Some(e) if e <= 0.0 => p,
            _ => p.next_up(),
        }
    }

    /// Sign of `exact(a/b) − fl(a/b)`.
    #[inline]
    fn div_err(a: f64, b: f64, q: f64) -> Option<f64> {
        if a == 0.0 {
            Some(0.0)
        } else if q.abs() < TINY || a.abs() < TINY || !q.is_finite() {
            None
        } else {
            // a − q·b is exact; its sign over b's sign is the error's sign.
            let r = (-q).mul_add(b, a);
            Some(if b > 0.0 { r } else { -r })
        }
    }

    #[inline]
    pub fn div_down(a: f64, b: f64) -> f64 {
        let q = a / b;
        match div_err(a, b, q) {
            Some(e) if e >= 0.0 => q,
            _ => q.next_down(),
        }
    }

    #[inline]
    pub fn div_up(a: f64, b: f64) -> f64 {
        let q = a / b;
        match div_err(a, b, q) {
            Some(e) if e <= 0.0 => q,
            _ => q.next_up(),
        }
    }

    #[inline]
    pub fn sqrt_down(a: f64) -> f64 {
        let s = a.sqrt();
        if a == 0.0 {
            return 0.0;
        }
        if a < TINY {
            return s.next_down().max(0.0);
        }
        if (-s).mul_add(s, a) < 0.0 {
            s.next_down()
        } else {
            s
        }
    }

    #[inline]
    pub fn sqrt_up(a: f64) -> f64 {
        let s = a.sqrt();
        if a == 0.0 {
            return 0.0;
        }
        if a < TINY {
            return s.next_up();
        }
        if (-s).mul_add(s, a) > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    pub fn exp_down(a: f64) -> f64 {
        let e = a.exp();
        if e < f64::MIN_POSITIVE * 4.0 {
            0.0
        } else {
            e.next_down().next_down()
        }
    }

    pub fn exp_up(a: f64) -> f64 {
        let e = a.exp();
        if e < f64::MIN_POSITIVE * 4.0 {
            f64::MIN_POSITIVE * 8.0
        } else {
            e.next_up().next_up()
        }
    }
}

/// A closed interval `[lo, hi]` of finite reals.
#[derive(Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Domain(format!("interval [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(Error::Argument(format!("inverted interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval. Panics on non-finite input.
    pub fn point(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite interval point {v}");
        Self { lo: v, hi: v }
    }

    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "raw interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Upper bound on `hi − lo`.
    pub fn width(&self) -> f64 {
        round::sub_up(self.hi, self.lo)
    }

    /// A float inside the interval, close to the midpoint.
    pub fn mid(&self) -> f64 {
        let m = self.lo + 0.5 * (self.hi - self.lo);
        m.clamp(self.lo, self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::raw(lo, hi))
    }

    /// Halves at [`Interval::mid`].
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval::raw(self.lo, m), Interval::raw(m, self.hi))
    }

    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Interval::raw(round::mul_down(self.lo, self.lo), round::mul_up(self.hi, self.hi))
        } else if self.hi <= 0.0 {
            Interval::raw(round::mul_down(self.hi, self.hi), round::mul_up(self.lo, self.lo))
        } else {
            let m = self.lo.abs().max(self.hi);
            Interval::raw(0.0, round::mul_up(m, m))
        }
    }

    /// Division; an interval divisor that contains zero is reported as
    /// [`Error::SplitRequired`].
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::SplitRequired);
        }
        let cands_down = [
            round::div_down(self.lo, rhs.lo),
            round::div_down(self.lo, rhs.hi),
            round::div_down(self.hi, rhs.lo),
            round::div_down(self.hi, rhs.hi),
        ];
        let cands_up = [
            round::div_up(self.lo, rhs.lo),
            round::div_up(self.lo, rhs.hi),
            round::div_up(self.hi, rhs.lo),
            round::div_up(self.hi, rhs.hi),
        ];
        Ok(Interval::raw(min4(cands_down), max4(cands_up)))
    }

    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.div(self)
    }

    /// Square root; a possibly negative argument needs a split.
    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::SplitRequired);
        }
        Ok(Interval::raw(round::sqrt_down(self.lo), round::sqrt_up(self.hi)))
    }

    pub fn exp(self) -> Interval {
        Interval::raw(round::exp_down(self.lo), round::exp_up(self.hi))
    }

    /// `[max(lo, 0), max(hi, 0)]`-style clamp to a bounding range.
    pub fn clamp_to(self, range: Interval) -> Interval {
        self.intersect(&range).unwrap_or(range)
    }
}

fn min4(v: [f64; 4]) -> f64 {
    v[0].min(v[1]).min(v[2]).min(v[3])
}

fn max4(v: [f64; 4]) -> f64 {
    v[0].max(v[1]).max(v[2]).max(v[3])
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(round::add_down(self.lo, rhs.lo), round::add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::raw(round::sub_down(self.lo, rhs.hi), round::sub_up(self.hi, rhs.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval::raw(round::mul_down(a, c), round::mul_up(b, d));
        }
        let lo = min4([
            round::mul_down(a, c),
            round::mul_down(a, d),
            round::mul_down(b, c),
            round::mul_down(b, d),
        ]);
        let hi = max4([
            round::mul_up(a, c),
            round::mul_up(a, d),
            round::mul_up(b, c),
            round::mul_up(b, d),
        ]);
        Interval::raw(lo, hi)
    }
}

impl From<f64> for Interval {
    fn from(v: f64) -> Self {
        Interval::point(v)
    }
}
