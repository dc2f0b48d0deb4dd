//! Standard normal tail `I(x) = P{η ≥ x}` and density `φ(x)` in double
//! precision, plus the constants derived from them.
//!
//! `I` is evaluated with the positive-term series
//! `∫₀ˣ φ = φ(x) · Σ x^{2k+1} / (2k+1)!!` for `|x| ≤ 3.5` and with
//! Laplace's continued fraction for the Mills ratio beyond. The same two
//! expansions, with explicit remainder brackets, back the rigorous interval
//! enclosures in [`crate::certify`].

use serde::Serialize;

use crate::error::{Error, Result};

/// `1/√(2π)`.
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Berry–Esseen constant used by default.
pub const DEFAULT_C_L: f64 = 0.56;

/// Constant of the asymptotic comparison bound `I(x)(1 + C/x)`.
pub const PINELIS_ASYMPTOTIC_C: f64 = 14.10;

/// Cut-over between the power series and the continued fraction.
pub(crate) const SERIES_LIMIT: f64 = 3.5;

/// Depth of the continued fraction. At `x = 3.5` the relative truncation
/// error is below 1e-20 and it shrinks quickly with `x`.
pub(crate) const CF_DEPTH: u32 = 60;

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{x}")))
    }
}

/// Standard normal density `φ(x) = e^{−x²/2}/√(2π)`.
pub fn normal_density(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(density(x))
}

/// Standard normal upper tail `I(x) = P{η ≥ x}`, absolute error below 1e-15.
pub fn normal_tail(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(tail(x))
}

/// Unchecked density. The exponent `x²/2` is carried as a double-double so
/// the relative error stays near one ulp even for large `|x|`.
pub(crate) fn density(x: f64) -> f64 {
    let sq = x * x;
    let sq_err = x.mul_add(x, -sq);
    let half = 0.5 * sq;
    // exp(-(half + err/2)) = exp(-half) * exp(-err/2), err tiny.
    (-half).exp() * (1.0 - 0.5 * sq_err) * FRAC_1_SQRT_2PI
}

/// Unchecked tail; NaN in, NaN out.
pub(crate) fn tail(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let y = x.abs();
    if y <= SERIES_LIMIT {
        let central = density(y) * series_sum(y);
        if x >= 0.0 {
            0.5 - central
        } else {
            0.5 + central
        }
    } else {
        let far = density(y) * mills_ratio_cf(y, CF_DEPTH);
        if x > 0.0 {
            far
        } else {
            1.0 - far
        }
    }
}

/// `Σ_{k≥0} y^{2k+1}/(2k+1)!!` with compensated summation.
fn series_sum(y: f64) -> f64 {
    let y2 = y * y;
    let mut term = y;
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut k = 0_u32;
    loop {
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        term *= y2 / f64::from(2 * k + 3);
        k += 1;
        if term < 1e-18 * sum && y2 < f64::from(2 * k + 3) {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    sum + comp
}

/// Truncated continued fraction `1/(y + 1/(y + 2/(y + …)))` evaluated
/// backwards from `depth`.
pub(crate) fn mills_ratio_cf(y: f64, depth: u32) -> f64 {
    let mut denom = y;
    for k in (1..=depth).rev() {
        denom = y + f64::from(k) / denom;
    }
    1.0 / denom
}

/// Named constants. All of them are computed from [`normal_tail`] and
/// [`normal_density`]; only `c_l` and `c_pinelis_asym` are inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Optimal constant `1/(4 I(√2))`.
    pub c_star: f64,
    /// Berry–Esseen constant.
    pub c_l: f64,
    /// `(c_star − 1) I(√3) / c_l`.
    pub tau_l: f64,
    pub q_alpha: f64,
    pub q_beta: f64,
    pub q_gamma: f64,
    pub c_pinelis_asym: f64,
    /// `(3 − 2√2)√3`, the largest `τ` in `E1`.
    pub tau_star: f64,
}

impl Constants {
    /// Constants for a given Berry–Esseen constant.
    pub fn with_c_l(c_l: f64) -> Result<Self> {
        if !(c_l.is_finite() && c_l > 0.0) {
            return Err(Error::Argument(format!("c_L must be positive, got {c_l}")));
        }
        let sqrt2 = std::f64::consts::SQRT_2;
        let sqrt3 = 3.0_f64.sqrt();
        let c_star = 1.0 / (4.0 * tail(sqrt2));
        let i3 = tail(sqrt3);
        let phi3 = density(sqrt3);
        Ok(Self {
            c_star,
            c_l,
            tau_l: (c_star - 1.0) * i3 / c_l,
            q_alpha: 2.0 * c_star * phi3,
            q_beta: 6.0 * sqrt3 * c_star * phi3 - 2.0 * c_star * i3 - 1.0,
            q_gamma: 2.0 * sqrt3 * c_star * i3,
            c_pinelis_asym: PINELIS_ASYMPTOTIC_C,
            tau_star: (3.0 - 2.0 * sqrt2) * sqrt3,
        })
    }

    /// `Q(τ) = −α τ² + β τ − γ`.
    pub fn q(&self, tau: f64) -> f64 {
        (-self.q_alpha * tau + self.q_beta) * tau - self.q_gamma
    }
}

impl Default for Constants {
    fn default() -> Self {
        constants()
    }
}

/// Constants with `c_L = 0.56`.
pub fn constants() -> Constants {
    Constants::with_c_l(DEFAULT_C_L).expect("default c_L is valid")
}
