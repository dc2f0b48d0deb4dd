//! Adaptive branch-and-bound over `(x, τ)` boxes.
//!
//! A claim is split into parts. Each part has a margin, an initial box and a
//! strictness. A box is accepted when the upper end of the margin enclosure
//! is below zero (at most zero for non-strict parts), otherwise it is halved
//! along its widest splittable side. Boxes are processed one depth level at
//! a time, in parallel, and every level keeps the order of its parent level,
//! so the resulting certificate does not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::claims::{Claim, ClaimConstants, Margin};
use super::enclose::enclose_tail;
use super::interval::Interval;
use super::real::Grad;
use crate::error::{Error, Result};
use crate::gaussian::DEFAULT_C_L;

/// Which side of the curve `(x−τ)² = 4xτ` a box belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegionTag {
    /// `(x−τ)² ≥ 4xτ`, i.e. `τ ≤ (3−2√2)x`.
    E1,
    /// `(x−τ)² ≤ 4xτ`, i.e. `τ ≥ (3−2√2)x`.
    E2,
    Custom,
}

/// A branch-and-bound work item.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParamBox {
    pub x: Interval,
    pub tau: Interval,
    pub region: RegionTag,
}

impl ParamBox {
    pub fn new(x: Interval, tau: Interval, region: RegionTag) -> Self {
        ParamBox { x, tau, region }
    }

    fn width(&self, dims: [bool; 2]) -> f64 {
        let w = [self.x.width(), self.tau.width()];
        (0..2).filter(|&i| dims[i]).map(|i| w[i]).fold(0.0, f64::max)
    }

    fn split(&self, dims: [bool; 2]) -> Option<(ParamBox, ParamBox)> {
        let use_x = dims[0] && (!dims[1] || self.x.width() >= self.tau.width());
        let (a, b) = if use_x {
            let (l, r) = self.x.bisect();
            ((l, self.tau), (r, self.tau))
        } else if dims[1] {
            let (l, r) = self.tau.bisect();
            ((self.x, l), (self.x, r))
        } else {
            return None;
        };
        // A box too narrow to halve in floating point cannot be refined.
        if (a.0 == self.x && a.1 == self.tau) || (b.0 == self.x && b.1 == self.tau) {
            return None;
        }
        Some((ParamBox { x: a.0, tau: a.1, ..*self }, ParamBox { x: b.0, tau: b.1, ..*self }))
    }

    /// Whether the box may meet its region (false only when it provably misses it).
    fn meets_region(&self, k: &ClaimConstants) -> bool {
        match self.region {
            RegionTag::E1 => self.tau.lo() <= (k.slope * Interval::point(self.x.hi())).hi(),
            RegionTag::E2 => self.tau.hi() >= (k.slope * Interval::point(self.x.lo())).lo(),
            RegionTag::Custom => true,
        }
    }

    /// Whether the point lies in the region, with a rigorous comparison.
    fn holds_point(&self, x: f64, t: f64, k: &ClaimConstants) -> bool {
        let edge = k.slope * Interval::point(x);
        match self.region {
            RegionTag::E1 => t <= edge.lo(),
            RegionTag::E2 => t >= edge.hi(),
            RegionTag::Custom => true,
        }
    }
}

/// Branch-and-bound settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertifyConfig {
    /// Upper end of the `x` range for `KKK`.
    pub x_max: f64,
    /// Width of the boundary strips near `x = √2` and `τ = 1`.
    pub delta: f64,
    /// Boxes narrower than this are not split further.
    pub tol: f64,
    pub max_depth: u32,
    pub c_l: f64,
    /// Upper end of the `KKK` strip near `τ = 0`, handled by the slope factorization.
    pub tau_min: f64,
    /// Intersect the natural enclosure with the mean-value form.
    pub mean_value: bool,
    /// Safety cap on the number of live boxes in one level.
    pub max_boxes: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            x_max: 8.0,
            delta: 1e-3,
            tol: 1e-12,
            max_depth: 50,
            c_l: DEFAULT_C_L,
            tau_min: 0.1,
            mean_value: true,
            max_boxes: 4_000_000,
        }
    }
}

impl CertifyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Argument(m));
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_depth > 60 {
            return bad(format!("max_depth must be at most 60, got {}", self.max_depth));
        }
        if !(self.x_max.is_finite() && self.x_max > 1.75 && self.x_max <= 40.0) {
            return bad(format!("x_max must lie in (1.75, 40], got {}", self.x_max));
        }
        if !(self.delta > 0.0 && self.delta <= 0.01) {
            return bad(format!("delta must lie in (0, 0.01], got {}", self.delta));
        }
        if !(self.tau_min > 0.0 && self.tau_min < 0.5) {
            return bad(format!("tau_min must lie in (0, 0.5), got {}", self.tau_min));
        }
        if self.max_boxes == 0 {
            return bad("max_boxes must be positive".into());
        }
        Ok(())
    }
}

/// One piece of a claim.
#[derive(Clone, Debug)]
pub struct Part {
    pub name: &'static str,
    pub margin: Margin,
    pub start: ParamBox,
    /// Strict parts need `margin < 0`, the others `margin ≤ 0`.
    pub strict: bool,
    /// Parts carrying the claim's own function; only these are searched for
    /// counterexamples.
    pub principal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Proved,
    Disproved { x: f64, tau: f64, value: Interval },
    Inconclusive { boxes: Vec<ParamBox> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartSummary {
    pub name: &'static str,
    pub strict: bool,
    pub leaves: usize,
    pub pruned: usize,
    /// Largest upper end of the margin over accepted leaves.
    pub worst_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Leaf {
    pub part: usize,
    pub bx: ParamBox,
    pub margin: Interval,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub claim: Claim,
    pub status: Status,
    pub leaves: usize,
    /// Largest upper end of the margin over the accepted leaves of the strict
    /// parts; negative on success.
    pub worst_bound: f64,
    pub depth_used: u32,
    pub c_l: f64,
    pub parts: Vec<PartSummary>,
    /// Facts the part layout relies on beyond the box enclosures.
    pub notes: Vec<String>,
    /// Accepted leaves in lexicographic order of `(part, x, τ)`.
    #[serde(skip)]
    pub leaf_boxes: Vec<Leaf>,
}

impl Certificate {
    pub fn is_proved(&self) -> bool {
        self.status == Status::Proved
    }
}

/// A sampled point `(x, τ, margin)` whose margin has the wrong sign.
pub type Violation = (f64, f64, f64);

/// Outcome of sampling points inside accepted leaves.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Soundness {
    pub points: usize,
    pub violations: Vec<Violation>,
}

enum Outcome {
    Accept(Interval),
    Pruned,
    Witness(f64, f64, Interval),
    Stuck,
    Split(ParamBox, ParamBox),
}

/// Runs claims under a fixed configuration.
#[derive(Clone, Debug)]
pub struct Certifier {
    config: CertifyConfig,
    k: ClaimConstants,
}

impl Certifier {
    pub fn new(config: CertifyConfig) -> Result<Self> {
        config.validate()?;
        let k = ClaimConstants::new(config.c_l)?;
        Ok(Certifier { config, k })
    }

    pub fn config(&self) -> &CertifyConfig {
        &self.config
    }

    pub fn constants(&self) -> &ClaimConstants {
        &self.k
    }

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).expect("ordered endpoints")
    }

    /// The part layout of a claim.
    pub fn parts(&self, claim: Claim) -> Vec<Part> {
        let k = &self.k;
        let cfg = &self.config;
        let (r2, r3) = (k.sqrt2, k.sqrt3);
        let tau_range = Self::iv(k.tau_l.lo(), k.tau_star.hi());
        let e1 = ParamBox::new(Self::iv(r2.lo(), r3.hi()), tau_range, RegionTag::E1);
        let d = Interval::point(cfg.delta);
        let part = |name, margin, start, strict, principal| Part { name, margin, start, strict, principal };
        let tau_only = ParamBox::new(r3, tau_range, RegionTag::Custom);
        match claim {
            Claim::GNeg => vec![part("g", Margin::G, tau_only, true, true)],
            Claim::GBelow(level) => vec![part("g_below", Margin::GBelow(level), tau_only, true, true)],
            Claim::QNeg => vec![part("q", Margin::Q, tau_only, true, true)],
            Claim::DfxPos => vec![part("dfx", Margin::Dfx, e1, true, true)],
            Claim::Lem2 => vec![part("lem2", Margin::Lem2, e1, true, true)],
            Claim::Lem3 => vec![part("lem3", Margin::Lem3, e1, true, true)],
            Claim::HNonpos => {
                let s = (r2 + d).hi();
                let main = ParamBox::new(
                    Self::iv(s, r3.hi()),
                    Self::iv((k.slope * Interval::point(s)).lo(), 1.0),
                    RegionTag::E2,
                );
                let strip_tau = Self::iv((k.slope * r2).lo(), 1.0);
                let strip = ParamBox::new(Self::iv(r2.lo(), s), strip_tau, RegionTag::E2);
                vec![
                    part("h", Margin::H, main, true, true),
                    part("h_ridge_slope", Margin::HRidgeSlope, strip, true, false),
                    part("h_gap", Margin::HGap, strip, true, false),
                ]
            }
            Claim::Kkk => {
                let x = Self::iv(r3.hi(), cfg.x_max);
                let t1 = 1.0 - cfg.delta;
                vec![
                    part("kkk", Margin::Kkk, ParamBox::new(x, Self::iv(cfg.tau_min, t1), RegionTag::Custom), true, true),
                    part(
                        "kkk_slope",
                        Margin::KkkSlope,
                        ParamBox::new(x, Self::iv(0.0, cfg.tau_min), RegionTag::Custom),
                        false,
                        false,
                    ),
                    part(
                        "kkk_far_tail",
                        Margin::KkkFarTail(cfg.delta),
                        ParamBox::new(x, Self::iv(t1, 1.0), RegionTag::Custom),
                        true,
                        false,
                    ),
                    part(
                        "kkk_far_monotone",
                        Margin::KkkFarMonotone(cfg.delta),
                        ParamBox::new(x, Self::iv(t1, 1.0), RegionTag::Custom),
                        true,
                        false,
                    ),
                ]
            }
            Claim::LowX => {
                let s = (r2 - d).lo();
                let zero = Interval::ZERO;
                vec![
                    part("low_flat", Margin::LowFlat, ParamBox::new(Self::iv(0.0, 1.0), zero, RegionTag::Custom), true, true),
                    part("low_cheb", Margin::LowCheb, ParamBox::new(Self::iv(1.0, s), zero, RegionTag::Custom), true, true),
                    part("low_slope", Margin::LowSlope, ParamBox::new(Self::iv(s, r2.hi()), zero, RegionTag::Custom), true, false),
                ]
            }
        }
    }

    /// Identities the part layout uses, checked by enclosure.
    fn notes(&self, claim: Claim) -> Vec<String> {
        let k = &self.k;
        let anchor = || enclose_tail(k.sqrt2).map(|i| Interval::ONE - Interval::point(4.0) * k.c_star * i);
        match claim {
            Claim::HNonpos => {
                let a = anchor().map(|v| v.to_string()).unwrap_or_default();
                vec![
                    format!(
                        "x in [sqrt2, sqrt2+{}]: h(x,t) <= h(x,1/x) = H(x)/(x^2-1) since dh/dt = 2(1-tx)/(x-t)^3 and x > t; \
                         H(sqrt2) = 1 - 4c*I(sqrt2) = 0 (enclosure {a}) and H' < 0",
                        self.config.delta
                    ),
                ]
            }
            Claim::Kkk => vec![
                format!(
                    "t in [0, {}]: the margin is 0 at t = 0 and nonincreasing in t, since for xt < 1 its t-derivative \
                     is <= 0 iff psi = ln((1+xt)/(1-xt)) - 2xt/(1-t^2) >= 0, psi(0) = 0 and psi' has the sign of \
                     P = (x^2-3) + t^2(1+x^2)",
                    self.config.tau_min
                ),
                format!(
                    "t in [{}, 1): A and B increase in t once xt > 1, so I(A)+I(B) <= 2I(A(x, 1-delta))",
                    1.0 - self.config.delta
                ),
            ],
            Claim::LowX => {
                let a = enclose_tail(k.sqrt2)
                    .map(|i| (Interval::point(0.25) - k.c_star * i).to_string())
                    .unwrap_or_default();
                vec![format!(
                    "x in [sqrt2-{}, sqrt2]: 1/(2x^2) - c*I(x) is increasing and equals 0 at sqrt2 (enclosure {a})",
                    self.config.delta
                )]
            }
            _ => Vec::new(),
        }
    }

    fn enclose(&self, m: Margin, b: &ParamBox) -> Result<Interval> {
        let g = m.eval(Grad::var(b.x, 0), Grad::var(b.tau, 1), &self.k)?;
        if !self.config.mean_value {
            return Ok(g.v);
        }
        let (cx, ct) = (b.x.mid(), b.tau.mid());
        let Ok(fc) = m.eval(Interval::point(cx), Interval::point(ct), &self.k) else {
            return Ok(g.v);
        };
        let mv = fc + g.d[0] * (b.x - Interval::point(cx)) + g.d[1] * (b.tau - Interval::point(ct));
        Ok(g.v.intersect(&mv).unwrap_or(g.v))
    }

    fn accepts(strict: bool, e: &Interval) -> bool {
        if strict {
            e.hi() < 0.0
        } else {
            e.hi() <= 0.0
        }
    }

    fn witness(&self, p: &Part, b: &ParamBox) -> Option<(f64, f64, Interval)> {
        let pts = [(b.x.lo(), b.tau.lo()), (b.x.mid(), b.tau.mid())];
        pts.into_iter().find_map(|(x, t)| {
            if !b.holds_point(x, t, &self.k) {
                return None;
            }
            let v = p.margin.eval(Interval::point(x), Interval::point(t), &self.k).ok()?;
            (v.lo() > 0.0).then_some((x, t, v))
        })
    }

    fn step(&self, p: &Part, b: &ParamBox, depth: u32) -> Outcome {
        if !b.meets_region(&self.k) {
            return Outcome::Pruned;
        }
        let dims = p.margin.uses();
        match self.enclose(p.margin, b) {
            Ok(e) if Self::accepts(p.strict, &e) => return Outcome::Accept(e),
            Ok(_) | Err(Error::SplitRequired) => {}
            Err(_) => return Outcome::Stuck,
        }
        if p.principal {
            if let Some((x, t, v)) = self.witness(p, b) {
                return Outcome::Witness(x, t, v);
            }
        }
        if depth >= self.config.max_depth || b.width(dims) < self.config.tol {
            return Outcome::Stuck;
        }
        match b.split(dims) {
            Some((l, r)) => Outcome::Split(l, r),
            None => Outcome::Stuck,
        }
    }

    pub fn certify(&self, claim: Claim) -> Certificate {
        let parts = self.parts(claim);
        let mut frontier: Vec<(usize, ParamBox)> = parts.iter().enumerate().map(|(i, p)| (i, p.start)).collect();
        let mut leaves = Vec::new();
        let mut stuck = Vec::new();
        let mut pruned = vec![0_usize; parts.len()];
        let mut witness = None;
        let mut depth = 0_u32;
        while !frontier.is_empty() {
            if frontier.len() > self.config.max_boxes {
                stuck.append(&mut frontier);
                break;
            }
            let outcomes: Vec<Outcome> =
                frontier.par_iter().map(|(i, b)| self.step(&parts[*i], b, depth)).collect();
            let mut next = Vec::new();
            for ((i, b), o) in frontier.iter().zip(outcomes) {
                match o {
                    Outcome::Accept(e) => leaves.push(Leaf { part: *i, bx: *b, margin: e }),
                    Outcome::Pruned => pruned[*i] += 1,
                    Outcome::Witness(x, t, v) => {
                        witness.get_or_insert((x, t, v));
                    }
                    Outcome::Stuck => stuck.push((*i, *b)),
                    Outcome::Split(l, r) => {
                        next.push((*i, l));
                        next.push((*i, r));
                    }
                }
            }
            if witness.is_some() {
                break;
            }
            if !next.is_empty() {
                depth += 1;
            }
            frontier = next;
        }
        let key = |l: &Leaf| (l.part, l.bx.x.lo(), l.bx.tau.lo(), l.bx.x.hi(), l.bx.tau.hi());
        leaves.sort_by(|a, b| key(a).partial_cmp(&key(b)).expect("finite box coordinates"));
        stuck.sort_by(|a, b| {
            (a.0, a.1.x.lo(), a.1.tau.lo()).partial_cmp(&(b.0, b.1.x.lo(), b.1.tau.lo())).expect("finite")
        });
        let summaries: Vec<PartSummary> = parts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mine = leaves.iter().filter(|l| l.part == i);
                PartSummary {
                    name: p.name,
                    strict: p.strict,
                    leaves: mine.clone().count(),
                    pruned: pruned[i],
                    worst_bound: mine.map(|l| l.margin.hi()).reduce(f64::max),
                }
            })
            .collect();
        let worst_bound = leaves
            .iter()
            .filter(|l| parts[l.part].strict)
            .map(|l| l.margin.hi())
            .fold(f64::NEG_INFINITY, f64::max);
        let status = match witness {
            Some((x, tau, value)) => Status::Disproved { x, tau, value },
            None if stuck.is_empty() => Status::Proved,
            None => Status::Inconclusive { boxes: stuck.into_iter().map(|(_, b)| b).collect() },
        };
        Certificate {
            claim,
            status,
            leaves: leaves.len(),
            worst_bound,
            depth_used: depth,
            c_l: self.config.c_l,
            parts: summaries,
            notes: self.notes(claim),
            leaf_boxes: leaves,
        }
    }

    /// Certificates for all eight claims, in the order of [`Claim::ALL`].
    pub fn certify_all(&self) -> Vec<Certificate> {
        Claim::ALL.iter().map(|&c| self.certify(c)).collect()
    }

    /// Domain rectangle of a claim's principal function.
    fn domain(&self, claim: Claim) -> (Interval, Interval, RegionTag) {
        let k = &self.k;
        let tau_range = Self::iv(k.tau_l.lo(), k.tau_star.hi());
        let strip = Self::iv(k.sqrt2.lo(), k.sqrt3.hi());
        match claim {
            Claim::GNeg | Claim::QNeg | Claim::GBelow(_) => (k.sqrt3, tau_range, RegionTag::Custom),
            Claim::DfxPos | Claim::Lem2 | Claim::Lem3 => (strip, Self::iv(k.tau_l.lo(), 1.0), RegionTag::E1),
            Claim::HNonpos => (strip, Self::iv(0.0, 1.0), RegionTag::E2),
            Claim::Kkk => (Self::iv(k.sqrt3.lo(), self.config.x_max), Self::iv(0.0, 1.0), RegionTag::Custom),
            Claim::LowX => (Self::iv(0.0, k.sqrt2.hi()), Interval::ZERO, RegionTag::Custom),
        }
    }

    /// Enclosure of the claim's own margin over `bx` (intersected with the
    /// claim's domain rectangle). `G_NEG`, `Q_NEG` ignore `bx.x`; `LOWX`
    /// ignores `bx.tau`.
    pub fn eval_claim(&self, claim: Claim, bx: &ParamBox) -> Result<Interval> {
        let (dx, dt, region) = self.domain(claim);
        let uses = self.principal_margins(claim)[0].uses();
        let x = if uses[0] { bx.x.intersect(&dx) } else { Some(dx) };
        let t = if uses[1] { bx.tau.intersect(&dt) } else { Some(dt) };
        let (Some(x), Some(t)) = (x, t) else {
            return Err(Error::Region(format!("{bx:?} misses the domain of {claim}")));
        };
        let b = ParamBox::new(x, t, region);
        if !b.meets_region(&self.k) {
            return Err(Error::Region(format!("{bx:?} misses region {region:?}")));
        }
        if claim == Claim::LowX {
            let mut acc: Option<Interval> = None;
            for (m, piece) in [(Margin::LowFlat, Self::iv(0.0, 1.0)), (Margin::LowCheb, Self::iv(1.0, x.hi().max(1.0)))] {
                if let Some(px) = x.intersect(&piece) {
                    let e = self.enclose(m, &ParamBox { x: px, ..b })?;
                    acc = Some(acc.map_or(e, |a| a.hull(&e)));
                }
            }
            return acc.ok_or_else(|| Error::Region(format!("{bx:?} misses the domain of {claim}")));
        }
        self.enclose(self.principal_margins(claim)[0], &b)
    }

    /// Point value of the claim's own margin; `LOWX` switches from the flat
    /// piece to the Chebyshev piece at `x = 1`.
    pub fn eval_point(&self, claim: Claim, x: f64, tau: f64) -> Result<f64> {
        let m = match claim {
            Claim::LowX if x <= 1.0 => Margin::LowFlat,
            Claim::LowX => Margin::LowCheb,
            _ => self.principal_margins(claim)[0],
        };
        m.eval(x, tau, &self.k)
    }

    fn principal_margins(&self, claim: Claim) -> Vec<Margin> {
        self.parts(claim).into_iter().filter(|p| p.principal).map(|p| p.margin).collect()
    }

    /// Evaluates each part's margin in point arithmetic at random points of
    /// the accepted leaves and reports sign violations. At most
    /// `per_leaf` points per leaf and `cap` points in total.
    pub fn soundness(&self, cert: &Certificate, per_leaf: usize, cap: usize, seed: u64) -> Soundness {
        let parts = self.parts(cert.claim);
        let n = cert.leaf_boxes.len().max(1);
        let per = per_leaf.min(cap / n).max(1);
        let chunks: Vec<(usize, Vec<Violation>)> = cert
            .leaf_boxes
            .par_iter()
            .enumerate()
            .map(|(j, leaf)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let p = &parts[leaf.part];
                let mut count = 0;
                let mut bad = Vec::new();
                for _ in 0..per {
                    let x = leaf.bx.x.lo() + leaf.bx.x.width() * rng.random::<f64>();
                    let t = leaf.bx.tau.lo() + leaf.bx.tau.width() * rng.random::<f64>();
                    let (x, t) = (x.min(leaf.bx.x.hi()), t.min(leaf.bx.tau.hi()));
                    if !leaf.bx.holds_point(x, t, &self.k) {
                        continue;
                    }
                    let Ok(v) = p.margin.eval(x, t, &self.k) else { continue };
                    count += 1;
                    let ok = if p.strict { v < 0.0 } else { v <= 0.0 };
                    if !ok {
                        bad.push((x, t, v));
                    }
                }
                (count, bad)
            })
            .collect();
        let points = chunks.iter().map(|c| c.0).sum();
        let violations = chunks.into_iter().flat_map(|c| c.1).collect();
        Soundness { points, violations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::enclose::sqrt_of;

    fn cert() -> Certifier {
        Certifier::new(CertifyConfig::default()).unwrap()
    }

    #[test]
    fn g_neg_and_q_neg_prove() {
        let c = cert();
        for claim in [Claim::GNeg, Claim::QNeg] {
            let r = c.certify(claim);
            assert!(r.is_proved(), "{r:?}");
            assert!(r.leaves >= 1 && r.worst_bound < 0.0);
        }
    }

    #[test]
    fn synthetic_claim_is_disproved_at_tau_l() {
        let c = cert();
        let r = c.certify(Claim::GBelow(-1.0));
        match r.status {
            Status::Disproved { tau, value, .. } => {
                assert_eq!(tau, c.constants().tau_l.lo());
                assert!((value.mid() - 0.952).abs() < 1e-3, "{value:?}");
            }
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn shallow_depth_is_inconclusive() {
        let c = Certifier::new(CertifyConfig { max_depth: 2, ..Default::default() }).unwrap();
        let r = c.certify(Claim::Kkk);
        assert!(matches!(r.status, Status::Inconclusive { ref boxes } if !boxes.is_empty()));
    }

    #[test]
    fn eval_claim_examples() {
        let c = cert();
        let k = *c.constants();
        let g = c.eval_claim(Claim::GNeg, &ParamBox::new(Interval::ZERO, k.tau_l, RegionTag::Custom)).unwrap();
        assert!(g.hi() < 0.0 && (g.mid() + 0.0483).abs() < 5e-4);
        let ridge = ParamBox::new(sqrt_of(2.0), sqrt_of(0.5), RegionTag::E2);
        assert!(c.eval_claim(Claim::HNonpos, &ridge).unwrap().contains(0.0));
        let flat = ParamBox::new(sqrt_of(3.0), Interval::ZERO, RegionTag::Custom);
        assert!(c.eval_claim(Claim::Kkk, &flat).unwrap().contains(0.0));
        let outside = ParamBox::new(Interval::point(5.0), Interval::point(0.2), RegionTag::E1);
        assert!(matches!(c.eval_claim(Claim::Lem3, &outside), Err(Error::Region(_))));
        let theta0 = ParamBox::new(Interval::point(2.0), Interval::new(0.9, 1.0).unwrap(), RegionTag::Custom);
        assert_eq!(c.eval_claim(Claim::Kkk, &theta0), Err(Error::SplitRequired));
        let low = c.eval_claim(Claim::LowX, &ParamBox::new(Interval::new(0.5, 1.2).unwrap(), Interval::ZERO, RegionTag::Custom));
        let at_one = 0.5 - crate::gaussian::constants().c_star * crate::gaussian::tail(1.0);
        assert!(low.unwrap().contains(at_one));
    }

    #[test]
    fn config_validation() {
        for cfg in [
            CertifyConfig { tol: 0.0, ..Default::default() },
            CertifyConfig { max_depth: 61, ..Default::default() },
            CertifyConfig { x_max: 1.5, ..Default::default() },
            CertifyConfig { delta: 0.0, ..Default::default() },
        ] {
            assert!(Certifier::new(cfg).is_err());
        }
    }

    #[test]
    fn parent_acceptance_passes_to_children() {
        let c = cert();
        for claim in [Claim::Lem2, Claim::QNeg] {
            let r = c.certify(claim);
            for leaf in r.leaf_boxes.iter().take(50) {
                let p = &c.parts(claim)[leaf.part];
                if let Some((l, rr)) = leaf.bx.split([true, true]) {
                    for ch in [l, rr] {
                        let e = c.enclose(p.margin, &ch).unwrap();
                        assert!(e.hi() < 0.0);
                    }
                }
            }
        }
    }
}
