//! The sign claims and their margin functions.
//!
//! Every margin is oriented so that the claim holds where the margin is
//! negative (or nonpositive, for the boundary factorization parts).
//!
//! Notation: `ϑ = √(1−τ²)`, `A = (x−τ)/ϑ`, `B = (x+τ)/ϑ`,
//! `D = (x−τ)² − 4xτ`, and
//! `f(x,τ) = D c* I(B) − 2c*(x−τ)² I(x) + ϑ²/2`, `g(τ) = f(√3, τ)`,
//! `h(x,τ) = (1−τ²)/(x−τ)² − 4c* I(x)`, `Q(τ) = −ατ² + βτ − γ`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::enclose::{enclose_density, enclose_tail, sqrt_of};
use super::interval::Interval;
use super::real::Real;
use crate::error::{Error, Result};

/// A named sign claim.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Claim {
    /// `g < 0` on `[τ_L, (3−2√2)√3]`.
    GNeg,
    /// `∂ₓf > 0` on E1.
    DfxPos,
    /// `h ≤ 0` on E2.
    HNonpos,
    /// `I′(B) ≥ ϑ I′(x)` on E1.
    Lem2,
    /// `I(B) ≥ I(x) + I′(x)τ` on E1.
    Lem3,
    /// `I(A) + I(B) ≤ 2I(x)` for `x ∈ [√3, X_max]`, `τ ∈ [0, 1−δ]`.
    Kkk,
    /// `Q < 0` on `[τ_L, (3−2√2)√3]`.
    QNeg,
    /// `min(1/2, 1/(2x²)) ≤ c* I(x)` on `(0, √2]`.
    LowX,
    /// Synthetic: `g < level` on the `G_NEG` range.
    GBelow(f64),
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::GNeg,
        Claim::DfxPos,
        Claim::HNonpos,
        Claim::Lem2,
        Claim::Lem3,
        Claim::Kkk,
        Claim::QNeg,
        Claim::LowX,
    ];

    pub fn id(&self) -> String {
        match self {
            Claim::GNeg => "G_NEG".into(),
            Claim::DfxPos => "DFX_POS".into(),
            Claim::HNonpos => "H_NONPOS".into(),
            Claim::Lem2 => "LEM2".into(),
            Claim::Lem3 => "LEM3".into(),
            Claim::Kkk => "KKK".into(),
            Claim::QNeg => "Q_NEG".into(),
            Claim::LowX => "LOWX".into(),
            Claim::GBelow(level) => format!("G_BELOW:{level}"),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    /// Accepts the ids above (case-insensitive, `-` for `_`) and
    /// `g-below:<level>`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, level) = match s.trim().split_once(':') {
            Some((h, l)) => (h, Some(l)),
            None => (s.trim(), None),
        };
        let norm = head.to_ascii_uppercase().replace('-', "_");
        if let (Some(level), "G_BELOW") = (level, norm.as_str()) {
            let v: f64 = level
                .parse()
                .map_err(|_| Error::Argument(format!("bad level in claim {s:?}")))?;
            if !v.is_finite() {
                return Err(Error::Argument(format!("bad level in claim {s:?}")));
            }
            return Ok(Claim::GBelow(v));
        }
        Claim::ALL
            .iter()
            .find(|c| c.id() == norm)
            .copied()
            .ok_or_else(|| Error::Argument(format!("unknown claim {s:?}")))
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.id())
    }
}

/// Rigorous enclosures of every constant a margin needs.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClaimConstants {
    pub c_l: f64,
    pub sqrt2: Interval,
    pub sqrt3: Interval,
    pub c_star: Interval,
    pub tau_l: Interval,
    /// `3 − 2√2`, the slope of the E1/E2 boundary `τ = (3−2√2)x`.
    pub slope: Interval,
    pub tau_star: Interval,
    pub q_alpha: Interval,
    pub q_beta: Interval,
    pub q_gamma: Interval,
}

impl ClaimConstants {
    pub fn new(c_l: f64) -> Result<Self> {
        if !(c_l.is_finite() && c_l > 0.0) {
            return Err(Error::Argument(format!("c_L must be positive, got {c_l}")));
        }
        let two = Interval::point(2.0);
        let sqrt2 = sqrt_of(2.0);
        let sqrt3 = sqrt_of(3.0);
        let i2 = enclose_tail(sqrt2)?;
        let i3 = enclose_tail(sqrt3)?;
        let p3 = enclose_density(sqrt3);
        let c_star = (Interval::point(4.0) * i2).recip()?;
        let tau_l = ((c_star - Interval::ONE) * i3).div(Interval::point(c_l))?;
        let slope = Interval::point(3.0) - two * sqrt2;
        let tau_star = slope * sqrt3;
        let k = ClaimConstants {
            c_l,
            sqrt2,
            sqrt3,
            c_star,
            tau_l,
            slope,
            tau_star,
            q_alpha: two * c_star * p3,
            q_beta: Interval::point(6.0) * sqrt3 * c_star * p3 - two * c_star * i3 - Interval::ONE,
            q_gamma: two * sqrt3 * c_star * i3,
        };
        if k.tau_l.hi() >= k.tau_star.lo() {
            return Err(Error::Argument(format!(
                "c_L = {c_l} gives tau_L {} above the E1 cap {}",
                k.tau_l, k.tau_star
            )));
        }
        Ok(k)
    }
}

/// A margin function of `(x, τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Margin {
    /// `g(τ)`; ignores `x`.
    G,
    /// `g(τ) − level`.
    GBelow(f64),
    /// `Q(τ)`; ignores `x`.
    Q,
    /// `−∂ₓf`.
    Dfx,
    /// `φ(B) − ϑ φ(x)`.
    Lem2,
    /// `I(x) − φ(x)τ − I(B)`.
    Lem3,
    /// `h(x,τ)`.
    H,
    /// `H′(x)` for the ridge value `H(x) = 1 − 4c*(x²−1)I(x) = (x²−1)h(x,1/x)`.
    HRidgeSlope,
    /// `τ − x`; keeps `(x−τ)³` and so the sign of `∂τh` well defined.
    HGap,
    /// `I(A) + I(B) − 2I(x)`.
    Kkk,
    /// A quantity with the sign of `∂τ[I(A)+I(B)]`: `−P` with
    /// `P = (x²−3) + τ²(1+x²)` where `xτ < 1`, and
    /// `φ(A)(1−xτ) − φ(B)(1+xτ)` where `xτ > 1`.
    KkkSlope,
    /// `2I(A(x, 1−δ)) − 2I(x)`; bounds the margin for `τ ≥ 1−δ`.
    KkkFarTail(f64),
    /// `1 − x(1−δ)`; makes `A` increasing in `τ` beyond `1−δ`.
    KkkFarMonotone(f64),
    /// `1/2 − c* I(x)`.
    LowFlat,
    /// `1/(2x²) − c* I(x)`.
    LowCheb,
    /// `1/x³ − c* φ(x)`, minus the derivative of `LowCheb`.
    LowSlope,
}

impl Margin {
    pub fn eval<R: Real>(&self, x: R, t: R, k: &ClaimConstants) -> Result<R> {
        let one = R::lit(1.0);
        let two = R::lit(2.0);
        let c = R::constant(k.c_star);
        match *self {
            Margin::G => f_value(R::constant(k.sqrt3), t, c),
            Margin::GBelow(level) => Ok(f_value(R::constant(k.sqrt3), t, c)? - R::lit(level)),
            Margin::Q => {
                let (a, b, g) = (R::constant(k.q_alpha), R::constant(k.q_beta), R::constant(k.q_gamma));
                Ok((b - a * t) * t - g)
            }
            Margin::Dfx => {
                let theta = (one - t.sqr()).sqrt()?;
                let b = (x + t).div(theta)?;
                let xm = x - t;
                let d = xm.sqr() - R::lit(4.0) * x * t;
                let dfx = two * (x - R::lit(3.0) * t) * c * b.tail()?
                    - (d * c * b.density()).div(theta)?
                    - R::lit(4.0) * c * xm * x.tail()?
                    + two * c * xm.sqr() * x.density();
                Ok(-dfx)
            }
            Margin::Lem2 => {
                let theta = (one - t.sqr()).sqrt()?;
                let b = (x + t).div(theta)?;
                Ok(b.density() - theta * x.density())
            }
            Margin::Lem3 => {
                let theta = (one - t.sqr()).sqrt()?;
                let b = (x + t).div(theta)?;
                Ok(x.tail()? - x.density() * t - b.tail()?)
            }
            Margin::H => Ok((one - t.sqr()).div((x - t).sqr())? - R::lit(4.0) * c * x.tail()?),
            Margin::HRidgeSlope => {
                let four_c = R::lit(4.0) * c;
                Ok(four_c * ((x.sqr() - one) * x.density() - two * x * x.tail()?))
            }
            Margin::HGap => Ok(t - x),
            Margin::Kkk => {
                let theta = (one - t.sqr()).sqrt()?;
                let a = (x - t).div(theta)?;
                let b = (x + t).div(theta)?;
                Ok(a.tail()? + b.tail()? - two * x.tail()?)
            }
            Margin::KkkSlope => {
                let xt = x * t;
                let gap = (one - xt).value();
                if gap.lo() > 0.0 {
                    Ok(-((x.sqr() - R::lit(3.0)) + t.sqr() * (one + x.sqr())))
                } else if gap.hi() < 0.0 {
                    let theta = (one - t.sqr()).sqrt()?;
                    let a = (x - t).div(theta)?;
                    let b = (x + t).div(theta)?;
                    Ok(a.density() * (one - xt) - b.density() * (one + xt))
                } else {
                    Err(Error::SplitRequired)
                }
            }
            Margin::KkkFarTail(delta) => {
                let t1 = R::lit(1.0 - delta);
                let theta = (one - t1.sqr()).sqrt()?;
                let a = (x - t1).div(theta)?;
                Ok(two * (a.tail()? - x.tail()?))
            }
            Margin::KkkFarMonotone(delta) => Ok(one - x * R::lit(1.0 - delta)),
            Margin::LowFlat => Ok(R::lit(0.5) - c * x.tail()?),
            Margin::LowCheb => Ok(R::lit(0.5).div(x.sqr())? - c * x.tail()?),
            Margin::LowSlope => Ok(one.div(x * x.sqr())? - c * x.density()),
        }
    }

    /// Whether the margin depends on `(x, τ)`.
    pub fn uses(&self) -> [bool; 2] {
        match self {
            Margin::G | Margin::GBelow(_) | Margin::Q => [false, true],
            Margin::HRidgeSlope
            | Margin::KkkFarTail(_)
            | Margin::KkkFarMonotone(_)
            | Margin::LowFlat
            | Margin::LowCheb
            | Margin::LowSlope => [true, false],
            _ => [true, true],
        }
    }
}

fn f_value<R: Real>(x: R, t: R, c: R) -> Result<R> {
    let one = R::lit(1.0);
    let theta2 = one - t.sqr();
    let b = (x + t).div(theta2.sqrt()?)?;
    let xm2 = (x - t).sqr();
    let d = xm2 - R::lit(4.0) * x * t;
    Ok(d * c * b.tail()? - R::lit(2.0) * c * xm2 * x.tail()? + theta2 * R::lit(0.5))
}

/// Point value of `f(x, τ)`.
pub fn f_point(x: f64, tau: f64, k: &ClaimConstants) -> f64 {
    f_value(x, tau, k.c_star.mid()).unwrap_or(f64::NAN)
}

/// `∂τ[I(A)+I(B)] = [φ(A)(1−xτ) − φ(B)(1+xτ)]/ϑ³`.
pub fn kkk_dtau(x: f64, tau: f64) -> f64 {
    let theta = (1.0 - tau * tau).sqrt();
    let (a, b) = ((x - tau) / theta, (x + tau) / theta);
    let p = |y: f64| crate::gaussian::density(y);
    (p(a) * (1.0 - x * tau) - p(b) * (1.0 + x * tau)) / theta.powi(3)
}

/// `ψ(τ) = ln((1+xτ)/(1−xτ)) − 2xτ/(1−τ²)`; `∂τ m ≤ 0` iff `ψ ≥ 0` when `xτ < 1`.
pub fn kkk_psi(x: f64, tau: f64) -> f64 {
    ((1.0 + x * tau) / (1.0 - x * tau)).ln() - 2.0 * x * tau / (1.0 - tau * tau)
}

/// `ψ′(τ) = 2xτ²P/((1−x²τ²)(1−τ²)²)`.
pub fn kkk_psi_dtau(x: f64, tau: f64) -> f64 {
    let p = (x * x - 3.0) + tau * tau * (1.0 + x * x);
    let t2 = 1.0 - tau * tau;
    2.0 * x * tau * tau * p / ((1.0 - x * x * tau * tau) * t2 * t2)
}

/// `∂τh = 2(1−τx)/(x−τ)³`.
pub fn h_dtau(x: f64, tau: f64) -> f64 {
    2.0 * (1.0 - tau * x) / (x - tau).powi(3)
}

/// `H(x) = 1 − 4c*(x²−1)I(x)`.
pub fn h_ridge(x: f64, k: &ClaimConstants) -> f64 {
    1.0 - 4.0 * k.c_star.mid() * (x * x - 1.0) * crate::gaussian::tail(x)
}
