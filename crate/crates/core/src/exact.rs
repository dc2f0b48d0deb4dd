//! Exact distribution of `S_n = a₁ε₁ + … + aₙεₙ` for independent fair signs.
//!
//! Tails are counted with a meet-in-the-middle sweep: both halves of the
//! sign vector are enumerated, each half is sorted, and pairs with
//! `l + r ≥ x` are counted with a two-pointer pass. Counts are carried as
//! integers over `2ⁿ` until the final division, so probabilities are exact
//! dyadic rationals up to the rounding of the computed sums themselves.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::gaussian;

/// Largest `n` accepted by [`exact_tail`].
pub const N_MAX: usize = 40;

/// Largest `n` for which the full support is materialized.
pub const ATOM_MAX: usize = 24;

/// Default tie tolerance: sums within this distance below `x` count as
/// `≥ x`. Computed sums carry rounding error, so an atom that equals `x`
/// mathematically can land one ulp below it.
pub const DEFAULT_TIE_EPS: f64 = 1e-12;

/// Unit-norm weights sorted in descending order, all positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    weights: Vec<f64>,
    tau: f64,
    theta: f64,
}

impl WeightVector {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest weight `a₁`.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `√(1 − τ²)`, computed as the norm of the remaining weights.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `n` equal weights `1/√n`.
    pub fn uniform(n: usize) -> Result<Self> {
        normalize(&vec![1.0; n])
    }

    /// Largest atom of `S_n`, i.e. `Σ aᵢ`.
    pub fn max_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Takes absolute values, drops zeros, sorts descending and rescales to unit
/// sum of squares.
pub fn normalize(raw: &[f64]) -> Result<WeightVector> {
    if raw.is_empty() {
        return Err(Error::InvalidWeights("empty weight list".into()));
    }
    if let Some(bad) = raw.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("weight {bad}")));
    }
    let mut weights: Vec<f64> = raw.iter().map(|v| v.abs()).filter(|v| *v > 0.0).collect();
    if weights.is_empty() {
        return Err(Error::InvalidWeights("all weights are zero".into()));
    }
    weights.sort_by(|a, b| b.total_cmp(a));
    let scale = weights[0];
    let norm = scale * weights.iter().map(|w| (w / scale).powi(2)).sum::<f64>().sqrt();
    for w in &mut weights {
        *w /= norm;
    }
    weights.sort_by(|a, b| b.total_cmp(a));
    let tau = weights[0];
    let theta = weights[1..].iter().map(|w| w * w).sum::<f64>().sqrt();
    Ok(WeightVector { weights, tau, theta })
}

/// All `2^len` signed sums of `weights`, built by repeated doubling.
fn signed_sums(weights: &[f64]) -> Vec<f64> {
    let mut sums = Vec::with_capacity(1 << weights.len());
    sums.push(0.0);
    for &w in weights {
        let len = sums.len();
        for i in 0..len {
            let s = sums[i];
            sums[i] = s - w;
            sums.push(s + w);
        }
    }
    sums
}

fn sorted_halves(weights: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let split = weights.len() / 2;
    let mut left = signed_sums(&weights[..split]);
    let mut right = signed_sums(&weights[split..]);
    left.sort_unstable_by(f64::total_cmp);
    right.sort_unstable_by(f64::total_cmp);
    (left, right)
}

/// Number of sign vectors with `l + r ≥ x − eps`, out of `2^n`.
fn count_at_least(weights: &[f64], x: f64, eps: f64) -> u64 {
    let (left, right) = sorted_halves(weights);
    let threshold = x - eps;
    let mut count = 0_u64;
    let mut j = right.len();
    // Ascending `l`: the set of qualifying `r` is a growing suffix.
    for &l in &left {
        while j > 0 && l + right[j - 1] >= threshold {
            j -= 1;
        }
        count += (right.len() - j) as u64;
    }
    count
}

/// Tail count `k` with `P{S_n ≥ x} = k / 2ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TailCount {
    pub count: u64,
    pub n: u32,
}

impl TailCount {
    pub fn probability(&self) -> f64 {
        self.count as f64 / (self.n as f64).exp2()
    }
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("threshold {x}")))
    }
}

/// Exact count of sign vectors with `S_n ≥ x − eps`.
pub fn tail_count(w: &WeightVector, x: f64, eps: f64) -> Result<TailCount> {
    check_x(x)?;
    if w.len() > N_MAX {
        return Err(Error::Size(format!("n = {} exceeds {N_MAX}", w.len())));
    }
    Ok(TailCount {
        count: count_at_least(&w.weights, x, eps),
        n: w.len() as u32,
    })
}

/// `P{S_n ≥ x}` with the default tie tolerance.
pub fn exact_tail(w: &WeightVector, x: f64) -> Result<f64> {
    exact_tail_with(w, x, DEFAULT_TIE_EPS)
}

pub fn exact_tail_with(w: &WeightVector, x: f64, eps: f64) -> Result<f64> {
    Ok(tail_count(w, x, eps)?.probability())
}

/// Distinct values of `S_n` with their multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomSupport {
    pub n: u32,
    pub values: Vec<f64>,
    pub counts: Vec<u64>,
}

impl AtomSupport {
    pub fn probabilities(&self) -> Vec<f64> {
        let total = (self.n as f64).exp2();
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// `P{S_n ≥ x − eps}` read off the support.
    pub fn tail(&self, x: f64, eps: f64) -> f64 {
        let start = self.values.partition_point(|&v| v < x - eps);
        let count: u64 = self.counts[start..].iter().sum();
        count as f64 / (self.n as f64).exp2()
    }

    /// `P{S_n ≤ x + eps}`.
    pub fn lower_tail(&self, x: f64, eps: f64) -> f64 {
        let end = self.values.partition_point(|&v| v <= x + eps);
        let count: u64 = self.counts[..end].iter().sum();
        count as f64 / (self.n as f64).exp2()
    }

    /// `E|S_n|^s`.
    pub fn abs_moment(&self, s: f64) -> f64 {
        let total = (self.n as f64).exp2();
        self.values
            .iter()
            .zip(&self.counts)
            .map(|(v, &c)| v.abs().powf(s) * c as f64)
            .sum::<f64>()
            / total
    }

    /// For every atom `v`, the count of sums `≥ v − eps`.
    pub fn atom_tail_counts(&self, eps: f64) -> Vec<u64> {
        let up = self.upper_counts();
        self.values
            .iter()
            .map(|&v| up[self.values.partition_point(|&u| u < v - eps)])
            .collect()
    }

    /// For every atom, the count of atoms at or above it.
    pub fn upper_counts(&self) -> Vec<u64> {
        let mut acc = 0;
        let mut out = vec![0; self.counts.len()];
        for i in (0..self.counts.len()).rev() {
            acc += self.counts[i];
            out[i] = acc;
        }
        out
    }
}

/// Full support of `S_n`. Sums are formed exactly as in [`exact_tail`]
/// (left half plus right half), so atom values and tail counts agree.
pub fn atom_support(w: &WeightVector) -> Result<AtomSupport> {
    if w.len() > ATOM_MAX {
        return Err(Error::Size(format!("n = {} exceeds {ATOM_MAX}", w.len())));
    }
    Ok(support_of(&w.weights))
}

fn support_of(weights: &[f64]) -> AtomSupport {
    let (left, right) = sorted_halves(weights);
    let mut all = Vec::with_capacity(left.len() * right.len());
    for &l in &left {
        all.extend(right.iter().map(|&r| l + r));
    }
    all.sort_unstable_by(f64::total_cmp);
    let mut values = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for v in all {
        // `+0.0` and `-0.0` are the same atom.
        let v = if v == 0.0 { 0.0 } else { v };
        match values.last() {
            Some(&last) if last == v => *counts.last_mut().unwrap() += 1,
            _ => {
                values.push(v);
                counts.push(1);
            }
        }
    }
    AtomSupport {
        n: weights.len() as u32,
        values,
        counts,
    }
}

/// Exact tail next to the Gaussian tail and every catalogued bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub weights: WeightVector,
    pub x: f64,
    pub exact: f64,
    pub gauss_tail: f64,
    /// `exact / gauss_tail`; `None` when the Gaussian tail underflows.
    pub ratio: Option<f64>,
    pub bounds: BTreeMap<String, f64>,
}

impl RatioReport {
    /// Bounds that fall below the exact tail by more than `slack`.
    pub fn violations(&self, slack: f64) -> Vec<(&str, f64)> {
        self.bounds
            .iter()
            .filter(|(name, v)| bounds::is_valid_bound(name) && self.exact > **v + slack)
            .map(|(name, v)| (name.as_str(), *v))
            .collect()
    }
}

/// Exact tail, Gaussian tail and their ratio, with all bounds filled in.
pub fn ratio(w: &WeightVector, x: f64) -> Result<RatioReport> {
    let exact = exact_tail(w, x)?;
    let gauss_tail = gaussian::normal_tail(x)?;
    let ratio = (gauss_tail > 0.0).then(|| exact / gauss_tail);
    Ok(RatioReport {
        weights: w.clone(),
        x,
        exact,
        gauss_tail,
        ratio,
        bounds: bounds::bound_table(x, w.tau()),
    })
}

/// `|P{S_n ≥ x} − (½P{X ≥ A} + ½P{X ≥ B})|` where `X` is the normalized
/// sum of the remaining weights, `A = (x − τ)/ϑ`, `B = (x + τ)/ϑ`.
pub fn split_check(w: &WeightVector, x: f64) -> Result<f64> {
    check_x(x)?;
    if w.len() < 2 {
        return Err(Error::Size("split needs n ≥ 2".into()));
    }
    if w.len() > N_MAX {
        return Err(Error::Size(format!("n = {} exceeds {N_MAX}", w.len())));
    }
    let theta = w.theta();
    if theta <= 0.0 {
        return Err(Error::Degenerate("ϑ = 0".into()));
    }
    let tau = w.tau();
    let rest: Vec<f64> = w.weights[1..].iter().map(|a| a / theta).collect();
    let m = rest.len() as i32;
    let p_rest = |t: f64| count_at_least(&rest, t, DEFAULT_TIE_EPS) as f64 / 2f64.powi(m);
    let a = (x - tau) / theta;
    let b = (x + tau) / theta;
    let rhs = 0.5 * p_rest(a) + 0.5 * p_rest(b);
    let lhs = exact_tail(w, x)?;
    Ok((lhs - rhs).abs())
}
