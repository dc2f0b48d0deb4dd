//! One generic number type for the margin formulas.
//!
//! Every margin is written once against [`Real`] and evaluated three ways:
//! as `f64` (point sampling), as [`Interval`] (natural enclosure) and as
//! [`Grad`] (enclosure together with an enclosure of its gradient in
//! `(x, τ)`, used by the mean-value form).

use std::ops::{Add, Mul, Neg, Sub};

use super::enclose::{enclose_density, enclose_tail};
use super::interval::Interval;
use crate::error::{Error, Result};
use crate::gaussian;

pub trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// A constant known only through an enclosure.
    fn constant(c: Interval) -> Self;
    fn div(self, rhs: Self) -> Result<Self>;
    fn sqrt(self) -> Result<Self>;
    fn sqr(self) -> Self;
    /// `I(self)`.
    fn tail(self) -> Result<Self>;
    /// `φ(self)`.
    fn density(self) -> Self;
    /// Range of the value.
    fn value(&self) -> Interval;

    fn lit(v: f64) -> Self {
        Self::constant(Interval::point(v))
    }
}

impl Real for f64 {
    fn constant(c: Interval) -> Self {
        c.mid()
    }

    fn div(self, rhs: Self) -> Result<Self> {
        if rhs == 0.0 {
            return Err(Error::SplitRequired);
        }
        Ok(self / rhs)
    }

    fn sqrt(self) -> Result<Self> {
        if self < 0.0 {
            return Err(Error::SplitRequired);
        }
        Ok(f64::sqrt(self))
    }

    fn sqr(self) -> Self {
        self * self
    }

    fn tail(self) -> Result<Self> {
        Ok(gaussian::tail(self))
    }

    fn density(self) -> Self {
        gaussian::density(self)
    }

    fn value(&self) -> Interval {
        Interval::raw(*self, *self)
    }
}

impl Real for Interval {
    fn constant(c: Interval) -> Self {
        c
    }

    fn div(self, rhs: Self) -> Result<Self> {
        Interval::div(self, rhs)
    }

    fn sqrt(self) -> Result<Self> {
        Interval::sqrt(self)
    }

    fn sqr(self) -> Self {
        Interval::sqr(self)
    }

    fn tail(self) -> Result<Self> {
        enclose_tail(self)
    }

    fn density(self) -> Self {
        enclose_density(self)
    }

    fn value(&self) -> Interval {
        *self
    }
}

/// Value and partial derivatives `(∂/∂x, ∂/∂τ)`, all as enclosures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grad {
    pub v: Interval,
    pub d: [Interval; 2],
}

impl Grad {
    /// The independent variable number `i` (0 for `x`, 1 for `τ`).
    pub fn var(v: Interval, i: usize) -> Self {
        let mut d = [Interval::ZERO; 2];
        d[i] = Interval::ONE;
        Grad { v, d }
    }

    fn scale(self, v: Interval, s: Interval) -> Self {
        Grad { v, d: [self.d[0] * s, self.d[1] * s] }
    }
}

impl Add for Grad {
    type Output = Grad;
    fn add(self, r: Grad) -> Grad {
        Grad { v: self.v + r.v, d: [self.d[0] + r.d[0], self.d[1] + r.d[1]] }
    }
}

impl Sub for Grad {
    type Output = Grad;
    fn sub(self, r: Grad) -> Grad {
        Grad { v: self.v - r.v, d: [self.d[0] - r.d[0], self.d[1] - r.d[1]] }
    }
}

impl Neg for Grad {
    type Output = Grad;
    fn neg(self) -> Grad {
        Grad { v: -self.v, d: [-self.d[0], -self.d[1]] }
    }
}

impl Mul for Grad {
    type Output = Grad;
    fn mul(self, r: Grad) -> Grad {
        Grad {
            v: self.v * r.v,
            d: [self.d[0] * r.v + r.d[0] * self.v, self.d[1] * r.v + r.d[1] * self.v],
        }
    }
}

impl Real for Grad {
    fn constant(c: Interval) -> Self {
        Grad { v: c, d: [Interval::ZERO; 2] }
    }

    fn div(self, r: Self) -> Result<Self> {
        let q = self.v.div(r.v)?;
        let d0 = (self.d[0] - q * r.d[0]).div(r.v)?;
        let d1 = (self.d[1] - q * r.d[1]).div(r.v)?;
        Ok(Grad { v: q, d: [d0, d1] })
    }

    fn sqrt(self) -> Result<Self> {
        let s = self.v.sqrt()?;
        let k = (s * Interval::point(2.0)).recip()?;
        Ok(self.scale(s, k))
    }

    fn sqr(self) -> Self {
        let k = self.v * Interval::point(2.0);
        self.scale(self.v.sqr(), k)
    }

    fn tail(self) -> Result<Self> {
        let t = enclose_tail(self.v)?;
        Ok(self.scale(t, -enclose_density(self.v)))
    }

    fn density(self) -> Self {
        let p = enclose_density(self.v);
        self.scale(p, -(self.v * p))
    }

    fn value(&self) -> Interval {
        self.v
    }
}
