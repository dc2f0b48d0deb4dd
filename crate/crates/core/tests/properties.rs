use std::f64::consts::SQRT_2;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radtail::bounds::{bound, verify_two_point, BoundKind, TwoPointForm, PRIOR_CONSTANTS};
use radtail::certify::{Certifier, CertifyConfig, Claim, ClaimConstants, Interval, Margin, ParamBox, RegionTag};
use radtail::exact::{atom_support, tail_count};
use radtail::search::{grid_search, local_search};
use radtail::selfnorm::{mc_selfnorm_tail, MagnitudeModel};
use radtail::{constants, exact_tail, normal_density, normal_tail, normalize};

fn weights(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01_f64..1.0, 1..=max_n)
}

fn brute(weights: &[f64], x: f64) -> u64 {
    let n = weights.len();
    (0..1_u64 << n)
        .filter(|m| (0..n).map(|i| if m >> i & 1 == 1 { weights[i] } else { -weights[i] }).sum::<f64>() >= x)
        .count() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn meet_in_the_middle_matches_enumeration(raw in weights(12), u in 0.0_f64..1.0) {
        let w = normalize(&raw).unwrap();
        let x = (2.0 * u - 1.0) * (w.max_sum() + 0.1);
        let s = atom_support(&w).unwrap();
        prop_assume!(s.values.iter().all(|v| (v - x).abs() > 1e-9));
        prop_assert_eq!(tail_count(&w, x, 0.0).unwrap().count, brute(w.weights(), x));
    }

    #[test]
    fn tail_is_monotone(raw in weights(10), a in -3.0_f64..3.0, b in -3.0_f64..3.0) {
        let w = normalize(&raw).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(exact_tail(&w, lo).unwrap() >= exact_tail(&w, hi).unwrap());
    }

    #[test]
    fn distribution_is_symmetric(raw in weights(10)) {
        let w = normalize(&raw).unwrap();
        let s = atom_support(&w).unwrap();
        let total: f64 = s.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for &v in &s.values {
            prop_assert_eq!(s.tail(v, 1e-12), s.lower_tail(-v, 1e-12));
        }
    }

    #[test]
    fn optimal_bound_holds(raw in weights(14)) {
        let w = normalize(&raw).unwrap();
        let c = constants().c_star;
        let s = atom_support(&w).unwrap();
        for &x in s.values.iter().filter(|&&v| v > 0.0) {
            prop_assert!(exact_tail(&w, x).unwrap() <= c * normal_tail(x).unwrap() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn two_point_slack_nonnegative(
        raw in weights(10),
        s in 0.2_f64..4.0,
        a in 0.0_f64..2.5,
        extra in 0.0_f64..1.5,
    ) {
        let w = normalize(&raw).unwrap();
        for form in [TwoPointForm::Symmetric, TwoPointForm::Absolute] {
            prop_assert!(verify_two_point(&w, s, a, a + extra, form).unwrap() >= -1e-12);
        }
    }
}

#[test]
fn two_point_thousand_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1000 {
        let n = rng.random_range(1..=10);
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
        let w = normalize(&raw).unwrap();
        let s = rng.random_range(0.1..4.0);
        let a = rng.random_range(0.0..2.5);
        let b = a + rng.random_range(0.0..1.5);
        assert!(verify_two_point(&w, s, a, b, TwoPointForm::Symmetric).unwrap() >= -1e-12);
    }
}

#[test]
fn normal_tail_properties() {
    let mut prev = f64::INFINITY;
    for i in 0..=1200 {
        let x = -6.0 + 0.01 * f64::from(i);
        let t = normal_tail(x).unwrap();
        assert!(t < prev, "x={x}");
        prev = t;
        if x > 0.0 {
            let p = normal_density(x).unwrap();
            let lower = p * 2.0 / (x + (x * x + 4.0).sqrt());
            let upper = p * 2.0 / (x + (x * x + 8.0 / std::f64::consts::PI).sqrt());
            assert!(lower <= t && t <= upper, "x={x}");
        }
    }
    for i in 0..=80 {
        let x = -4.0 + 0.1 * f64::from(i);
        let h = 1e-5;
        let d = (normal_tail(x + h).unwrap() - normal_tail(x - h).unwrap()) / (2.0 * h);
        assert!((d + normal_density(x).unwrap()).abs() < 1e-8);
    }
    assert!((constants().c_star * 4.0 * normal_tail(SQRT_2).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn bound_orderings() {
    let c = constants();
    let mut x = SQRT_2;
    while x <= 6.0 {
        let opt = bound(&BoundKind::GaussianOptimal, x, None).unwrap();
        assert!(opt <= bound(&BoundKind::Hoeffding, x, None).unwrap());
        x += 0.01;
    }
    let mut prior: Vec<f64> = PRIOR_CONSTANTS.iter().map(|p| p.1).collect();
    prior.push(1.01 * c.c_star);
    prior.sort_by(f64::total_cmp);
    for i in 0..=300 {
        let x = 0.02 * f64::from(i);
        let mut last = bound(&BoundKind::GaussianOptimal, x, None).unwrap();
        for &k in &prior {
            let v = bound(&BoundKind::PriorConstant { name: String::new(), c: k }, x, None).unwrap();
            if v < 1.0 {
                assert!(last <= v, "x={x} c={k}");
            }
            last = v;
        }
    }
}

#[test]
fn berry_esseen_on_uniform_weights() {
    for n in 1..=20 {
        let w = radtail::WeightVector::uniform(n).unwrap();
        for k in 0..=40 {
            let x = 0.1 * f64::from(k);
            let d = (exact_tail(&w, x).unwrap() - normal_tail(x).unwrap()).abs();
            assert!(d <= 0.56 / (n as f64).sqrt());
        }
    }
}

#[test]
fn enclosures_contain_point_values() {
    let certifier = Certifier::new(CertifyConfig::default()).unwrap();
    let k = *certifier.constants();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let claims = [
        (Claim::GNeg, (1.7_f64, 1.8_f64), (0.162_f64, 0.297_f64)),
        (Claim::QNeg, (1.7, 1.8), (0.162, 0.297)),
        (Claim::DfxPos, (1.415, 1.732), (0.162, 0.297)),
        (Claim::Lem2, (1.415, 1.732), (0.162, 0.297)),
        (Claim::Lem3, (1.415, 1.732), (0.162, 0.297)),
        (Claim::HNonpos, (1.415, 1.732), (0.3, 1.0)),
        (Claim::Kkk, (1.733, 8.0), (0.0, 0.99)),
        (Claim::LowX, (0.01, 1.414), (0.0, 0.0)),
    ];
    let mut checked = 0;
    while checked < 10_000 {
        let (claim, (xa, xb), (ta, tb)) = claims[rng.random_range(0..claims.len())];
        let x0 = rng.random_range(xa..xb);
        let t0 = if tb > ta { rng.random_range(ta..tb) } else { ta };
        let wx = rng.random_range(0.0..0.05_f64).min(xb - x0);
        let wt = rng.random_range(0.0..0.05_f64).min((tb - t0).max(0.0));
        let region = match claim {
            Claim::DfxPos | Claim::Lem2 | Claim::Lem3 => RegionTag::E1,
            Claim::HNonpos => RegionTag::E2,
            _ => RegionTag::Custom,
        };
        let bx = ParamBox::new(Interval::new(x0, x0 + wx).unwrap(), Interval::new(t0, t0 + wt).unwrap(), region);
        let Ok(e) = certifier.eval_claim(claim, &bx) else { continue };
        let (px, pt) = (x0 + wx * rng.random::<f64>(), t0 + wt * rng.random::<f64>());
        let (px, pt) = match claim {
            Claim::GNeg | Claim::QNeg => (k.sqrt3.mid(), pt),
            Claim::LowX => (px, 0.0),
            _ => (px, pt),
        };
        let p = certifier.eval_point(claim, px, pt).unwrap();
        let slack = 1e-15 + 1e-12 * p.abs();
        assert!(e.lo() - slack <= p && p <= e.hi() + slack, "{claim} {bx:?} ({px}, {pt}) {p} {e:?}");
        checked += 1;
    }
}

#[test]
fn accepted_leaves_stay_accepted_when_split() {
    let certifier = Certifier::new(CertifyConfig::default()).unwrap();
    for claim in [Claim::GNeg, Claim::Lem2, Claim::Lem3, Claim::HNonpos, Claim::LowX] {
        let cert = certifier.certify(claim);
        let parts = certifier.parts(claim);
        for leaf in cert.leaf_boxes.iter().filter(|l| parts[l.part].principal) {
            let (xl, xr) = leaf.bx.x.bisect();
            let (tl, tr) = leaf.bx.tau.bisect();
            for (x, t) in [(xl, tl), (xl, tr), (xr, tl), (xr, tr)] {
                let child = ParamBox::new(x, t, leaf.bx.region);
                if let Ok(e) = certifier.eval_claim(claim, &child) {
                    assert!(e.hi() < 0.0, "{claim} {child:?} {e:?}");
                }
            }
        }
    }
}

#[test]
fn h_peaks_at_one_over_x() {
    let k = ClaimConstants::new(0.56).unwrap();
    for i in 1..40 {
        let x = SQRT_2 + (3.0_f64.sqrt() - SQRT_2) * f64::from(i) / 40.0;
        let ridge = Margin::H.eval(x, 1.0 / x, &k).unwrap();
        let lo = k.slope.mid() * x;
        for j in 0..=200 {
            let t = lo + (1.0 - lo) * f64::from(j) / 200.0;
            assert!(Margin::H.eval(x, t, &k).unwrap() <= ridge + 1e-15, "x={x} t={t}");
        }
        assert!(ridge < 0.0);
    }
}

#[test]
fn reduced_certificates() {
    let small = Certifier::new(CertifyConfig { x_max: 4.0, ..Default::default() }).unwrap();
    assert!(small.certify(Claim::Kkk).is_proved());
    let shallow = Certifier::new(CertifyConfig { max_depth: 2, ..Default::default() }).unwrap();
    let certs = shallow.certify_all();
    assert!(certs.iter().any(|c| matches!(c.status, radtail::Status::Inconclusive { .. })));
}

#[test]
fn searches_never_exceed_c_star() {
    let c = constants().c_star;
    for (n, step) in [(1, 0.1), (2, 0.01), (3, 0.02), (4, 0.05), (5, 0.1)] {
        let r = grid_search(n, step).unwrap();
        assert!(r.best_ratio <= c * (1.0 + 1e-9), "n={n}");
    }
    let start = normalize(&[0.9, 0.5, 0.3, 0.1]).unwrap();
    let r = local_search(&start, 2000, 1).unwrap();
    assert!(r.trace.iter().all(|t| t.ratio <= c * (1.0 + 1e-9)));
    assert!(r.best_ratio <= c * (1.0 + 1e-9));
}

#[test]
fn selfnormalized_bound() {
    let c = constants().c_star;
    let models = ["lognormal:0,1", "exponential:1", "pareto:1,2.5", "fixed:1,1", "fixed:3,1,1,2"];
    for (i, text) in models.iter().enumerate() {
        let m = MagnitudeModel::parse(text, 5).unwrap();
        for x in [1.0, SQRT_2, 2.0, 2.5] {
            let e = mc_selfnorm_tail(&m, 100_000, 50 + i as u64, x).unwrap();
            assert!(e.estimate <= c * normal_tail(x).unwrap() + 4.0 * e.stderr, "{text} x={x}");
        }
    }
}
