//! Tails of self-normalized sums `T_n = ΣXᵢ / √(ΣXᵢ²)` of symmetric summands.
//!
//! Writing `Xᵢ = εᵢ rᵢ` with `rᵢ = |Xᵢ|`, `T_n` given the magnitudes is the
//! Rademacher sum with weights `r/‖r‖`, which gives the exact reduction. The
//! Monte Carlo estimator draws magnitudes from a model and signs uniformly.
//!
//! Random streams come from ChaCha8. Samples are drawn in fixed-size chunks
//! and chunk `k` uses stream `k` of the master seed, so the estimate does not
//! depend on the number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, LogNormal, Pareto};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_tail, normalize, DEFAULT_TIE_EPS};

/// Smallest accepted Monte Carlo sample size.
pub const MIN_SAMPLES: u64 = 10_000;

const CHUNK: u64 = 8192;

/// `P{T_n ≥ x}` given the magnitudes.
pub fn exact_selfnorm_tail(magnitudes: &[f64], x: f64) -> Result<f64> {
    if magnitudes.is_empty() {
        return Err(Error::Argument("no magnitudes".into()));
    }
    if let Some(bad) = magnitudes.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::Argument(format!("magnitudes must be positive, got {bad}")));
    }
    exact_tail(&normalize(magnitudes)?, x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Magnitudes {
    Fixed { values: Vec<f64> },
    Lognormal { mu: f64, sigma: f64 },
    Exponential { rate: f64 },
    Pareto { scale: f64, shape: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnitudeModel {
    pub kind: Magnitudes,
    pub n: usize,
}

impl MagnitudeModel {
    pub fn fixed(values: &[f64]) -> Result<Self> {
        if values.is_empty() || values.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::Argument("fixed magnitudes must be positive and non-empty".into()));
        }
        Ok(MagnitudeModel { kind: Magnitudes::Fixed { values: values.to_vec() }, n: values.len() })
    }

    /// A sampler by name with its parameters: `lognormal(mu, sigma)`,
    /// `exponential(rate)` or `pareto(scale, shape)`.
    pub fn sampler(name: &str, params: &[f64], n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("n must be at least 1".into()));
        }
        let pos = |v: f64| v.is_finite() && v > 0.0;
        let bad = || Error::Argument(format!("invalid parameters {params:?} for {name}"));
        let kind = match (name.to_ascii_lowercase().as_str(), params) {
            ("lognormal", &[mu, sigma]) if mu.is_finite() && pos(sigma) => Magnitudes::Lognormal { mu, sigma },
            ("exponential", &[rate]) if pos(rate) => Magnitudes::Exponential { rate },
            ("pareto", &[scale, shape]) if pos(scale) && pos(shape) => Magnitudes::Pareto { scale, shape },
            ("lognormal" | "exponential" | "pareto", _) => return Err(bad()),
            _ => return Err(Error::Argument(format!("unknown sampler {name:?}"))),
        };
        Ok(MagnitudeModel { kind, n })
    }

    /// Parses `fixed:1,2,3`, `lognormal:0,1`, `exponential:1` or
    /// `pareto:1,3`; `n` is ignored for fixed magnitudes.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let (name, rest) = text.split_once(':').unwrap_or((text, ""));
        let params: Vec<f64> = rest
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Argument(format!("model {text:?}: {e}")))?;
        if name.eq_ignore_ascii_case("fixed") {
            Self::fixed(&params)
        } else {
            Self::sampler(name, &params, n)
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng, out: &mut Vec<f64>) {
        out.clear();
        match &self.kind {
            Magnitudes::Fixed { values } => out.extend_from_slice(values),
            Magnitudes::Lognormal { mu, sigma } => {
                let d = LogNormal::new(*mu, *sigma).expect("validated parameters");
                out.extend((0..self.n).map(|_| d.sample(rng)));
            }
            Magnitudes::Exponential { rate } => {
                let d = Exp::new(*rate).expect("validated parameters");
                out.extend((0..self.n).map(|_| d.sample(rng)));
            }
            Magnitudes::Pareto { scale, shape } => {
                let d = Pareto::new(*scale, *shape).expect("validated parameters");
                out.extend((0..self.n).map(|_| d.sample(rng)));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    /// Binomial standard error `√(p(1−p)/N)`.
    pub stderr: f64,
    pub samples: u64,
    pub hits: u64,
}

/// Monte Carlo estimate of `P{T_n ≥ x}`. Ties within 1e-12 below `x` count
/// as hits, as in the exact tail.
pub fn mc_selfnorm_tail(model: &MagnitudeModel, samples: u64, seed: u64, x: f64) -> Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::Argument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("threshold {x}")));
    }
    let chunks = samples.div_ceil(CHUNK);
    let threshold = x - DEFAULT_TIE_EPS;
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let count = CHUNK.min(samples - k * CHUNK);
            let mut r = Vec::with_capacity(model.n);
            let mut hits = 0;
            for _ in 0..count {
                model.draw(&mut rng, &mut r);
                let mut num = 0.0;
                let mut den = 0.0;
                for &v in &r {
                    num += if rng.random::<bool>() { v } else { -v };
                    den += v * v;
                }
                let t = num / den.sqrt();
                assert!(t.abs() <= (r.len() as f64).sqrt() * (1.0 + 1e-12), "|T| = {t} exceeds sqrt(n)");
                if t >= threshold {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(McEstimate { estimate: p, stderr: (p * (1.0 - p) / samples as f64).sqrt(), samples, hits })
}
