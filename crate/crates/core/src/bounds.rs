//! Closed-form upper bounds for `P{S_n ≥ x}` and the Chebyshev-type checks
//! built on `a^s 1{|Y| ≥ a} + (b^s − a^s) 1{|Y| ≥ b} ≤ |Y|^s`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{atom_support, WeightVector, DEFAULT_TIE_EPS};
use crate::gaussian::{self, Constants};

/// Published constants `c` for bounds of the form `c · I(x)`.
pub const PRIOR_CONSTANTS: [(&str, f64); 3] = [
    ("prior_bgh_12.01", 12.01),
    ("prior_pinelis94_4.46", 4.46),
    ("prior_bentkus07_4.00", 4.00),
];

/// Name of the `1.01 · c_star` row.
pub const PRIOR_PINELIS07: &str = "prior_pinelis07_1.01c*";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundKind {
    /// `c_star · I(x)`.
    GaussianOptimal,
    /// `1/(2x²)` capped at `1/2` for `x > 0`, `1` otherwise.
    SymmetryChebyshev,
    /// `e^{−x²/2}`.
    Hoeffding,
    /// `I(x) + c_L τ`.
    BerryEsseen,
    /// `I(x)(1 + 14.10/x)`.
    PinelisAsymptotic,
    /// `c · I(x)` for a published constant.
    PriorConstant { name: String, c: f64 },
}

impl BoundKind {
    pub fn name(&self) -> String {
        match self {
            BoundKind::GaussianOptimal => "gaussian_optimal".into(),
            BoundKind::SymmetryChebyshev => "symmetry_chebyshev".into(),
            BoundKind::Hoeffding => "hoeffding".into(),
            BoundKind::BerryEsseen => "berry_esseen".into(),
            BoundKind::PinelisAsymptotic => "pinelis_asymptotic".into(),
            BoundKind::PriorConstant { name, .. } => name.clone(),
        }
    }

    /// Every kind, with the prior-constant rows for `c`.
    pub fn all(c: &Constants) -> Vec<BoundKind> {
        let mut kinds = vec![
            BoundKind::GaussianOptimal,
            BoundKind::SymmetryChebyshev,
            BoundKind::Hoeffding,
            BoundKind::BerryEsseen,
            BoundKind::PinelisAsymptotic,
        ];
        kinds.extend(PRIOR_CONSTANTS.iter().map(|(name, c)| BoundKind::PriorConstant {
            name: (*name).into(),
            c: *c,
        }));
        kinds.push(BoundKind::PriorConstant {
            name: PRIOR_PINELIS07.into(),
            c: 1.01 * c.c_star,
        });
        kinds
    }
}

/// Whether a row of [`bound_table`] is used as a checked upper bound. The
/// asymptotic comparison row is display only.
pub fn is_valid_bound(name: &str) -> bool {
    name != "pinelis_asymptotic"
}

/// Value of a bound with the default constants.
pub fn bound(kind: &BoundKind, x: f64, tau: Option<f64>) -> Result<f64> {
    bound_with(kind, x, tau, &gaussian::constants())
}

pub fn bound_with(kind: &BoundKind, x: f64, tau: Option<f64>, c: &Constants) -> Result<f64> {
    let i = gaussian::normal_tail(x)?;
    let value = match kind {
        BoundKind::GaussianOptimal => c.c_star * i,
        BoundKind::SymmetryChebyshev => {
            if x <= 0.0 {
                1.0
            } else {
                (0.5 / (x * x)).min(0.5)
            }
        }
        BoundKind::Hoeffding => (-0.5 * x * x).exp(),
        BoundKind::BerryEsseen => {
            let tau = tau.ok_or_else(|| Error::Argument("berry_esseen needs tau".into()))?;
            if !(tau > 0.0 && tau <= 1.0) {
                return Err(Error::Argument(format!("tau must lie in (0, 1], got {tau}")));
            }
            i + c.c_l * tau
        }
        BoundKind::PinelisAsymptotic => {
            if x <= 0.0 {
                1.0
            } else {
                i * (1.0 + c.c_pinelis_asym / x)
            }
        }
        BoundKind::PriorConstant { c, .. } => c * i,
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Every bound at `x`, Berry–Esseen evaluated at `tau`.
pub fn bound_table(x: f64, tau: f64) -> BTreeMap<String, f64> {
    bound_table_with(x, tau, &gaussian::constants())
}

pub fn bound_table_with(x: f64, tau: f64, c: &Constants) -> BTreeMap<String, f64> {
    BoundKind::all(c)
        .iter()
        .filter_map(|k| bound_with(k, x, Some(tau), c).ok().map(|v| (k.name(), v)))
        .collect()
}

/// Table of bounds plus the exact tail; see [`crate::exact::ratio`].
pub fn compare_all(w: &WeightVector, x: f64) -> Result<crate::exact::RatioReport> {
    crate::exact::ratio(w, x)
}

/// Which form of the two-point Chebyshev inequality to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoPointForm {
    /// `a^s P{Y ≥ a} + (b^s − a^s) P{Y ≥ b} ≤ E|Y|^s / 2`, for symmetric `Y`.
    Symmetric,
    /// `a^s P{|Y| ≥ a} + (b^s − a^s) P{|Y| ≥ b} ≤ E|Y|^s`.
    Absolute,
}

/// Slack of the two-point inequality for `Y = S_n`: right side minus left.
pub fn verify_two_point(w: &WeightVector, s: f64, a: f64, b: f64, form: TwoPointForm) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Argument(format!("s must be positive, got {s}")));
    }
    if !(a.is_finite() && b.is_finite()) || a < 0.0 || a > b {
        return Err(Error::Argument(format!("need 0 ≤ a ≤ b, got a={a}, b={b}")));
    }
    let support = atom_support(w)?;
    let moment = support.abs_moment(s);
    let (pa, pb, rhs) = match form {
        TwoPointForm::Symmetric => (
            support.tail(a, DEFAULT_TIE_EPS),
            support.tail(b, DEFAULT_TIE_EPS),
            moment / 2.0,
        ),
        TwoPointForm::Absolute => {
            let total = (support.n as f64).exp2();
            let abs_tail = |t: f64| {
                let k: u64 = support
                    .values
                    .iter()
                    .zip(&support.counts)
                    .filter(|(v, _)| v.abs() >= t - DEFAULT_TIE_EPS)
                    .map(|(_, c)| c)
                    .sum();
                k as f64 / total
            };
            (abs_tail(a), abs_tail(b), moment)
        }
    };
    let (sa, sb) = (a.powf(s), b.powf(s));
    Ok(rhs - (sa * pa + (sb - sa) * pb))
}

/// Partial sum `Σ_{k=1}^{k_max} P{S_n ≥ √k}` and its slack against `1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainResult {
    pub sum: f64,
    pub slack: f64,
    /// Number of terms that were nonzero.
    pub terms: u64,
}

pub fn chebyshev_chain(w: &WeightVector, k_max: u64) -> Result<ChainResult> {
    if k_max == 0 {
        return Err(Error::Argument("k_max must be at least 1".into()));
    }
    let support = atom_support(w)?;
    let top = *support.values.last().expect("support is never empty");
    let mut sum = 0.0;
    let mut terms = 0;
    for k in 1..=k_max {
        let x = (k as f64).sqrt();
        // Every later term is zero.
        if x - DEFAULT_TIE_EPS > top {
            break;
        }
        sum += support.tail(x, DEFAULT_TIE_EPS);
        terms = k;
    }
    Ok(ChainResult {
        sum,
        slack: 0.5 - sum,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::normalize;
    use std::f64::consts::SQRT_2;

    #[test]
    fn bound_examples() {
        let s3 = 3.0_f64.sqrt();
        assert!((bound(&BoundKind::GaussianOptimal, SQRT_2, None).unwrap() - 0.25).abs() < 1e-15);
        let h = bound(&BoundKind::Hoeffding, SQRT_2, None).unwrap();
        assert!((h - (-1.0_f64).exp()).abs() < 1e-15);
        let be = bound(&BoundKind::BerryEsseen, s3, Some(0.16)).unwrap();
        assert!((be - (0.041_632_258_331_775_2 + 0.56 * 0.16)).abs() < 1e-15);
        assert_eq!(bound(&BoundKind::SymmetryChebyshev, 1.0, None).unwrap(), 0.5);
        assert_eq!(bound(&BoundKind::SymmetryChebyshev, -1.0, None).unwrap(), 1.0);
        assert!(matches!(
            bound(&BoundKind::BerryEsseen, 1.0, None),
            Err(Error::Argument(_))
        ));
        assert_eq!(bound(&BoundKind::GaussianOptimal, -10.0, None).unwrap(), 1.0);
    }

    #[test]
    fn compare_all_examples() {
        let r = compare_all(&normalize(&[1.0, 1.0]).unwrap(), SQRT_2).unwrap();
        assert_eq!(r.exact, 0.25);
        assert!((r.bounds["gaussian_optimal"] - 0.25).abs() < 1e-15);
        assert!((r.bounds["hoeffding"] - 0.367_879_441_171_442_3).abs() < 1e-15);
        assert_eq!(r.bounds.len(), 9);
        assert!(r.violations(1e-12).is_empty());

        let r = compare_all(&normalize(&[1.0]).unwrap(), 2.0).unwrap();
        assert_eq!(r.exact, 0.0);
        assert!(r.bounds.values().all(|v| *v >= 0.0));

        let r = compare_all(&normalize(&[1.0; 4]).unwrap(), 1.0).unwrap();
        assert_eq!(r.exact, 0.3125);
        assert!((r.bounds["gaussian_optimal"] - 0.504_310_405_966_441_2).abs() < 1e-12);
    }

    #[test]
    fn two_point_examples() {
        let w = normalize(&[1.0, 1.0]).unwrap();
        let slack = verify_two_point(&w, 2.0, 1.0, SQRT_2, TwoPointForm::Symmetric).unwrap();
        assert!(slack.abs() < 1e-12);
        let w = normalize(&[1.0]).unwrap();
        let slack = verify_two_point(&w, 2.0, 0.0, 1.0, TwoPointForm::Symmetric).unwrap();
        assert!(slack.abs() < 1e-12);
        let w = normalize(&[0.8, 0.6]).unwrap();
        let slack = verify_two_point(&w, 2.0, 0.2, 1.4, TwoPointForm::Symmetric).unwrap();
        assert!(slack.abs() < 1e-12);
        assert!(verify_two_point(&w, 2.0, 1.0, 0.5, TwoPointForm::Symmetric).is_err());
        assert!(verify_two_point(&w, 2.0, -0.1, 0.5, TwoPointForm::Symmetric).is_err());
        assert!(verify_two_point(&w, 0.0, 0.1, 0.5, TwoPointForm::Symmetric).is_err());
    }

    #[test]
    fn two_point_absolute_form() {
        // |S| ∈ {0.2, 1.4} each with probability 1/2; E S² = 1.
        let w = normalize(&[0.8, 0.6]).unwrap();
        let slack = verify_two_point(&w, 2.0, 0.2, 1.4, TwoPointForm::Absolute).unwrap();
        assert!(slack.abs() < 1e-12);
        let slack = verify_two_point(&w, 1.0, 0.5, 1.0, TwoPointForm::Absolute).unwrap();
        assert!(slack >= 0.0);
    }

    #[test]
    fn chain_examples() {
        let r = chebyshev_chain(&normalize(&[1.0, 1.0]).unwrap(), 3).unwrap();
        assert!((r.sum - 0.5).abs() < 1e-15 && r.slack.abs() < 1e-15);
        let r = chebyshev_chain(&normalize(&[1.0]).unwrap(), 5).unwrap();
        assert_eq!(r.sum, 0.5);
        assert_eq!(r.terms, 1);
        let r = chebyshev_chain(&normalize(&[1.0; 4]).unwrap(), 4).unwrap();
        assert_eq!(r.sum, 0.5);
        assert_eq!(r.slack, 0.0);
        assert!(chebyshev_chain(&normalize(&[1.0]).unwrap(), 0).is_err());
    }

    #[test]
    fn optimal_beats_hoeffding_above_sqrt2() {
        let mut x = SQRT_2;
        while x <= 6.0 {
            let g = bound(&BoundKind::GaussianOptimal, x, None).unwrap();
            let h = bound(&BoundKind::Hoeffding, x, None).unwrap();
            assert!(g <= h, "x={x}");
            x += 0.01;
        }
    }

    #[test]
    fn prior_constants_ordered() {
        let c = gaussian::constants();
        for i in 0..400 {
            let x = -2.0 + 0.02 * f64::from(i);
            let t = bound_table(x, 0.5);
            let row = |k: &str| t[k];
            let chain = [
                row("gaussian_optimal"),
                row(PRIOR_PINELIS07),
                row("prior_bentkus07_4.00"),
                row("prior_pinelis94_4.46"),
                row("prior_bgh_12.01"),
            ];
            if chain.iter().all(|v| *v < 1.0) {
                assert!(chain.windows(2).all(|p| p[0] <= p[1]), "x={x}");
            }
            assert!(c.c_star < 1.01 * c.c_star);
        }
    }
}
