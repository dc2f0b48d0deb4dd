//! Rigorous enclosures of `I(y)` and `φ(y)`.
//!
//! For `|y| ≤ 3.5` the central mass `∫₀^|y| φ = φ(y) Σ y^{2k+1}/(2k+1)!!` is
//! summed until the terms fall below 1e-17 of the partial sum, and the rest
//! of the series is bounded by a geometric tail. Beyond 3.5 the Mills ratio
//! `I(y)/φ(y)` is enclosed by two consecutive convergents of its continued
//! fraction (they lie on opposite sides of the limit), intersected with the
//! elementary pair `1/y − 1/y³ ≤ I(y)/φ(y) ≤ 1/y`.

use std::sync::OnceLock;

use super::interval::{round, Interval};
use crate::error::{Error, Result};
use crate::gaussian::{CF_DEPTH, SERIES_LIMIT};

/// Enclosure of `1/√(2π)`.
pub fn frac_1_sqrt_2pi() -> Interval {
    static CELL: OnceLock<Interval> = OnceLock::new();
    *CELL.get_or_init(|| {
        // The f64 value of π lies below π and its successor above.
        let pi = Interval::raw(std::f64::consts::PI, std::f64::consts::PI.next_up());
        let root = (pi * Interval::point(2.0)).sqrt().expect("2π > 0");
        root.recip().expect("√(2π) > 0")
    })
}

/// Enclosure of `√v` for a float `v ≥ 0`.
pub fn sqrt_of(v: f64) -> Interval {
    Interval::point(v).sqrt().expect("nonnegative literal")
}

/// `φ(y)` at an exact float `y`.
fn density_point(y: f64) -> Interval {
    let half_sq = Interval::point(y).sqr() * Interval::point(-0.5);
    half_sq.exp() * frac_1_sqrt_2pi()
}

/// `Σ_{k≥0} y^{2k+1}/(2k+1)!!` for `0 ≤ y ≤ 3.5`.
fn central_series(y: f64) -> Interval {
    let yi = Interval::point(y);
    let y2 = yi.sqr();
    let mut term = yi;
    let mut sum = Interval::ZERO;
    let mut k = 0_u32;
    loop {
        sum = sum + term;
        let denom = f64::from(2 * k + 3);
        term = (term * y2).div(Interval::point(denom)).expect("positive denominator");
        k += 1;
        // Every later ratio t_{j+1}/t_j = y²/(2j+3) is at most this.
        let ratio = round::div_up(y2.hi(), f64::from(2 * k + 3));
        if ratio < 0.5 && term.hi() <= 1e-17 * sum.lo() || term.hi() == 0.0 {
            let rest = round::div_up(term.hi(), round::sub_down(1.0, ratio));
            return sum + Interval::raw(0.0, rest);
        }
    }
}

/// Enclosure of the continued fraction truncated at `depth`.
fn cf_convergent(y: Interval, depth: u32) -> Interval {
    let mut denom = y;
    for k in (1..=depth).rev() {
        denom = y + Interval::point(f64::from(k)).div(denom).expect("positive denominator");
    }
    denom.recip().expect("positive denominator")
}

/// Mills ratio `I(y)/φ(y)` for `y > 3.5`.
fn mills_ratio(y: f64) -> Interval {
    let yi = Interval::point(y);
    let even = cf_convergent(yi, CF_DEPTH);
    let odd = cf_convergent(yi, CF_DEPTH + 1);
    let cf = even.hull(&odd);
    let inv = yi.recip().expect("y > 0");
    let inv3 = inv * inv.sqr();
    let pair = Interval::raw((inv - inv3).lo(), inv.hi());
    cf.intersect(&pair).unwrap_or(cf)
}

/// Rigorous enclosure of `I(y)` at an exact float `y`.
pub fn tail_point(y: f64) -> Interval {
    let a = y.abs();
    let unit = Interval::raw(0.0, 1.0);
    let half = Interval::point(0.5);
    let r = if a <= SERIES_LIMIT {
        let central = density_point(a) * central_series(a);
        if y >= 0.0 {
            half - central
        } else {
            half + central
        }
    } else {
        let far = density_point(a) * mills_ratio(a);
        if y > 0.0 {
            far
        } else {
            Interval::ONE - far
        }
    };
    r.clamp_to(unit)
}

/// Enclosure of `{I(t) : t ∈ x}`; `I` is decreasing so only the endpoints
/// are evaluated.
pub fn enclose_tail(x: Interval) -> Result<Interval> {
    if !(x.lo().is_finite() && x.hi().is_finite()) {
        return Err(Error::Argument(format!("interval {x}")));
    }
    let lo = tail_point(x.hi()).lo();
    let hi = tail_point(x.lo()).hi();
    Ok(Interval::raw(lo, hi))
}

/// Enclosure of `{φ(t) : t ∈ x}`.
pub fn enclose_density(x: Interval) -> Interval {
    let (a, b) = (density_point(x.lo()), density_point(x.hi()));
    if x.lo() >= 0.0 {
        Interval::raw(b.lo(), a.hi())
    } else if x.hi() <= 0.0 {
        Interval::raw(a.lo(), b.hi())
    } else {
        Interval::raw(a.lo().min(b.lo()), frac_1_sqrt_2pi().hi())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian;

    #[test]
    fn tail_at_zero() {
        let e = enclose_tail(Interval::ZERO).unwrap();
        assert!(e.contains(0.5));
        assert!(e.width() <= 1e-10);
    }

    #[test]
    fn tail_at_sqrt2_contains_quarter_over_c_star() {
        let e = enclose_tail(sqrt_of(2.0)).unwrap();
        let c = gaussian::constants();
        assert!(e.contains(1.0 / (4.0 * c.c_star)));
        assert!(e.contains(0.078_649_603_525_142_57));
    }

    #[test]
    fn tail_over_range() {
        let x = Interval::new(1.4, 1.5).unwrap();
        let e = enclose_tail(x).unwrap();
        let (at_lo, at_hi) = (gaussian::tail(1.4), gaussian::tail(1.5));
        assert!(e.lo() <= at_hi && e.hi() >= at_lo);
        assert!((e.lo() - at_hi).abs() < 1e-8 && (e.hi() - at_lo).abs() < 1e-8);
    }

    #[test]
    fn point_widths_are_tiny() {
        for i in -70..=70 {
            let y = 0.05 * f64::from(i);
            let e = tail_point(y);
            assert!(e.width() <= 1e-10, "y={y} {e:?}");
            assert!(e.contains(gaussian::tail(y)) || (e.mid() - gaussian::tail(y)).abs() < 1e-15);
        }
    }

    #[test]
    fn far_tail_is_relatively_tight() {
        // mpmath: erfc(y/√2)/2
        for (y, want) in [
            (4.0, 3.167_124_183_311_992e-5),
            (8.0, 6.220_960_574_271_784e-16),
            (20.0, 2.753_624_118_606_233_7e-89),
        ] {
            let e = tail_point(y);
            assert!(e.lo() <= want * (1.0 + 1e-15) && want * (1.0 - 1e-15) <= e.hi(), "y={y}");
            assert!(e.width() <= 1e-13 * want, "y={y} {e:?}");
        }
        let e = tail_point(-6.0);
        assert!(e.contains(1.0 - 9.865_876_450_376_981e-10));
    }

    #[test]
    fn density_enclosures() {
        let e = enclose_density(Interval::ZERO);
        assert!(e.contains(gaussian::FRAC_1_SQRT_2PI));
        let e = enclose_density(Interval::new(-1.0, 2.0).unwrap());
        assert!(e.contains(gaussian::density(0.0)) && e.contains(gaussian::density(2.0)));
        let e = enclose_density(sqrt_of(3.0));
        assert!(e.contains(0.089_016_054_915_951_47));
    }

    #[test]
    fn random_points_inside_tail_enclosure() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let lo: f64 = rng.random_range(-9.0..9.0);
            let w: f64 = rng.random_range(0.0..0.5);
            let x = Interval::new(lo, lo + w).unwrap();
            let t = lo + w * rng.random::<f64>();
            let e = enclose_tail(x).unwrap();
            let p = gaussian::tail(t);
            // Point evaluation carries up to ~1e-15 absolute error.
            assert!(e.lo() - 2e-15 <= p && p <= e.hi() + 2e-15, "x={x:?} t={t}");
        }
    }
}
