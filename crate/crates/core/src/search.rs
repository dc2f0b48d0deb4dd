//! Search for weight vectors with a large exact-to-Gaussian tail ratio.
//!
//! The tail `P{S_n ≥ x}` is constant between consecutive atoms while `I(x)`
//! decreases, so for fixed weights the ratio is maximized at a positive atom.
//! Only atoms are evaluated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{atom_support, normalize, WeightVector, DEFAULT_TIE_EPS};
use crate::gaussian;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub weights: Vec<f64>,
    pub x: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_weights: WeightVector,
    pub best_x: f64,
    pub best_ratio: f64,
    /// Number of `(weights, atom)` pairs evaluated.
    pub evaluations: u64,
    /// Accepted improvements, in order (local search only).
    pub trace: Vec<TracePoint>,
}

/// Best ratio over the positive atoms of `w`: `(x, ratio, atoms evaluated)`.
pub fn best_atom_ratio(w: &WeightVector) -> Result<(f64, f64, u64)> {
    let support = atom_support(w)?;
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    let mut evaluated = 0;
    let total = f64::from(support.n).exp2();
    let counts = support.atom_tail_counts(DEFAULT_TIE_EPS);
    for (&v, &k) in support.values.iter().zip(&counts).filter(|(&v, _)| v > 0.0) {
        let gauss = gaussian::tail(v);
        if gauss <= 0.0 {
            continue;
        }
        evaluated += 1;
        let r = k as f64 / total / gauss;
        if r > best.1 {
            best = (v, r);
        }
    }
    Ok((best.0, best.1, evaluated))
}

/// Partitions of `total` into at most `parts` positive summands, each list
/// descending, in lexicographically descending order.
fn partitions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, cap: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        for v in (1..=cap.min(left)).rev() {
            cur.push(v);
            rec(left - v, v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, parts, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive search over squared weights `kᵢ·step` (`Σkᵢ = 1/step`) with at
/// most `n` nonzero entries.
pub fn grid_search(n: usize, step: f64) -> Result<SearchResult> {
    if !(1..=8).contains(&n) {
        return Err(Error::Argument(format!("n must lie in 1..=8, got {n}")));
    }
    if !(0.01..=0.5).contains(&step) {
        return Err(Error::Argument(format!("step must lie in [0.01, 0.5], got {step}")));
    }
    let total = (1.0 / step).round() as u32;
    if (total as usize) < n {
        return Err(Error::Argument(format!("step {step} is too coarse for n = {n}")));
    }
    let cells = partitions(total, n);
    let scored: Vec<(f64, f64, u64)> = cells
        .par_iter()
        .map(|ks| {
            let raw: Vec<f64> = ks.iter().map(|&k| (f64::from(k) / f64::from(total)).sqrt()).collect();
            normalize(&raw).and_then(|w| best_atom_ratio(&w))
        })
        .collect::<Result<_>>()?;
    // First maximum in enumeration order, so ties go to the lexicographically
    // largest composition.
    let mut best = 0;
    for (i, s) in scored.iter().enumerate() {
        if s.1 > scored[best].1 {
            best = i;
        }
    }
    let raw: Vec<f64> = cells[best].iter().map(|&k| (f64::from(k) / f64::from(total)).sqrt()).collect();
    Ok(SearchResult {
        best_weights: normalize(&raw)?,
        best_x: scored[best].0,
        best_ratio: scored[best].1,
        evaluations: scored.iter().map(|s| s.2).sum(),
        trace: Vec::new(),
    })
}

/// Random mass moves between squared weights, keeping improvements only.
/// The move size grows after a success and shrinks after a failure.
pub fn local_search(start: &WeightVector, iterations: u64, seed: u64) -> Result<SearchResult> {
    if iterations == 0 {
        return Err(Error::Argument("iterations must be at least 1".into()));
    }
    let (x0, r0, mut evaluations) = best_atom_ratio(start)?;
    let mut best = (start.clone(), x0, r0);
    let mut trace = vec![TracePoint { weights: start.weights().to_vec(), x: x0, ratio: r0 }];
    let n = start.len();
    if n == 1 {
        return Ok(SearchResult { best_weights: best.0, best_x: x0, best_ratio: r0, evaluations, trace });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut step = 0.05_f64;
    for _ in 0..iterations {
        let mass: Vec<f64> = best.0.weights().iter().map(|w| w * w).collect();
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let moved = step * mass[i] * rng.random::<f64>();
        let mut next = mass;
        next[i] -= moved;
        next[j] += moved;
        let raw: Vec<f64> = next.iter().map(|m| m.max(0.0).sqrt()).collect();
        let Ok(w) = normalize(&raw) else { continue };
        let (x, r, e) = best_atom_ratio(&w)?;
        evaluations += e;
        if r > best.2 {
            trace.push(TracePoint { weights: w.weights().to_vec(), x, ratio: r });
            best = (w, x, r);
            step = (step * 1.5).min(0.5);
        } else {
            step = (step * 0.9).max(1e-12);
        }
    }
    Ok(SearchResult { best_weights: best.0, best_x: best.1, best_ratio: best.2, evaluations, trace })
}
