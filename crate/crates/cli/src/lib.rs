//! Command-line frontend for `radtail`. [`run`] takes the argument list and
//! two writers so it can be driven from tests.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use radtail::bounds::{bound_table, chebyshev_chain};
use radtail::certify::{Certificate, Certifier, CertifyConfig, Claim, Leaf, Soundness};
use radtail::exact::{tail_count, DEFAULT_TIE_EPS};
use radtail::gaussian::Constants;
use radtail::selfnorm::{exact_selfnorm_tail, mc_selfnorm_tail, Magnitudes, MagnitudeModel};
use radtail::{grid_search, local_search, normal_tail, normalize, ratio, WeightVector};
use serde::Serialize;
use serde_json::{json, Value};

/// Relative slack for comparing a ratio with `c*`.
const RATIO_SLACK: f64 = 1e-9;
/// Absolute slack for a bound falling below the exact tail.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "radtail", version, about = "Tails of weighted Rademacher sums and the optimal Gaussian bound")]
pub struct Cli {
    /// Output format. CSV is available for `bounds` only.
    #[arg(long, global = true, value_enum, env = "RADTAIL_FORMAT", default_value = "json")]
    pub format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Cap on worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Named constants (c*, tau_L, Q coefficients).
    Constants {
        /// Berry-Esseen constant.
        #[arg(long = "c-l", default_value_t = 0.56)]
        c_l: f64,
    },
    /// Exact tail P{S_n >= x}.
    Tail(Point),
    /// Every catalogued bound at x next to the exact tail.
    Bounds(Point),
    /// Exact tail over the Gaussian tail, with all bounds.
    Ratio(Point),
    /// Partial sum of P{S_n >= sqrt(k)} against 1/2.
    Chain {
        #[arg(short, long, required = true, value_delimiter = ',', value_parser = parse_weight)]
        weights: Vec<f64>,
        #[arg(long = "k-max", default_value_t = 10_000)]
        k_max: u64,
    },
    /// Certify one claim (or `all`) by interval branch and bound.
    Certify(CertifyArgs),
    /// Grid search for the largest tail ratio, optionally refined locally.
    Search {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        step: f64,
        /// Refine the grid optimum by local search.
        #[arg(long)]
        refine: bool,
        #[arg(long, default_value_t = 10_000)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo tail of a self-normalized sum against c* I(x).
    Selfnorm {
        /// `fixed:r1,r2,..`, `lognormal:mu,sigma`, `exponential:rate` or `pareto:scale,shape`.
        #[arg(long)]
        model: String,
        /// Number of summands for sampled magnitudes.
        #[arg(short, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, allow_negative_numbers = true)]
        x: f64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct Point {
    /// Comma-separated weights; rescaled to unit norm.
    #[arg(short, long, required = true, value_delimiter = ',', value_parser = parse_weight)]
    pub weights: Vec<f64>,
    #[arg(short, allow_negative_numbers = true)]
    pub x: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    /// Claim id (G_NEG, DFX_POS, H_NONPOS, LEM2, LEM3, KKK, Q_NEG, LOWX,
    /// G_BELOW:<level>) or `all`.
    #[arg(value_parser = check_claim, allow_hyphen_values = true)]
    pub claim: String,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "max-depth")]
    pub max_depth: Option<u32>,
    #[arg(long = "x-max")]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long = "c-l")]
    pub c_l: Option<f64>,
    #[arg(long = "tau-min")]
    pub tau_min: Option<f64>,
    /// Include every accepted leaf box with its margin enclosure.
    #[arg(long)]
    pub leaves: bool,
    /// Sample this many points per accepted leaf (at most 10^5 per claim)
    /// and check the point margins.
    #[arg(long, default_value_t = 0)]
    pub soundness: usize,
}

fn parse_weight(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err("not a finite decimal".into()),
    }
}

fn check_claim(s: &str) -> Result<String, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok("all".into());
    }
    Claim::from_str(s).map(|_| s.to_string()).map_err(|e| e.to_string())
}

/// Invalid input detected after parsing; reported with exit code 2.
struct Usage(String);

impl From<radtail::Error> for Usage {
    fn from(e: radtail::Error) -> Self {
        Usage(e.to_string())
    }
}

struct Report {
    result: Value,
    csv: Option<String>,
    /// Set when a check inside the report failed.
    failed: Option<String>,
}

impl Report {
    fn new(result: impl Serialize) -> Self {
        Report { result: to_value(result), csv: None, failed: None }
    }

    fn fail_if(mut self, bad: bool, msg: impl FnOnce() -> String) -> Self {
        if bad {
            self.failed = Some(msg());
        }
        self
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn weights(raw: &[f64], notices: &mut Vec<String>) -> Result<WeightVector, Usage> {
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    let w = normalize(raw)?;
    if (norm - 1.0).abs() > 1e-9 {
        notices.push(format!("notice: weights rescaled to unit norm (input norm {norm})"));
    }
    Ok(w)
}

fn certify(args: &CertifyArgs, config: &mut Value) -> Result<Report, Usage> {
    let d = CertifyConfig::default();
    let cfg = CertifyConfig {
        tol: args.tol.unwrap_or(d.tol),
        max_depth: args.max_depth.unwrap_or(d.max_depth),
        x_max: args.x_max.unwrap_or(d.x_max),
        delta: args.delta.unwrap_or(d.delta),
        c_l: args.c_l.unwrap_or(d.c_l),
        tau_min: args.tau_min.unwrap_or(d.tau_min),
        ..d
    };
    let certifier = Certifier::new(cfg)?;
    config["certifier"] = to_value(certifier.config());
    let claims = if args.claim == "all" { Claim::ALL.to_vec() } else { vec![Claim::from_str(&args.claim)?] };

    #[derive(Serialize)]
    struct Out<'a> {
        #[serde(flatten)]
        cert: &'a Certificate,
        #[serde(skip_serializing_if = "Option::is_none")]
        leaf_boxes: Option<&'a [Leaf]>,
        #[serde(skip_serializing_if = "Option::is_none")]
        soundness: Option<Soundness>,
    }

    let certs: Vec<Certificate> = claims.iter().map(|&c| certifier.certify(c)).collect();
    let mut bad = Vec::new();
    let out: Vec<Out> = certs
        .iter()
        .enumerate()
        .map(|(i, cert)| {
            let soundness =
                (args.soundness > 0).then(|| certifier.soundness(cert, args.soundness, 100_000, 1000 + i as u64));
            let sound = soundness.as_ref().is_none_or(|s| s.violations.is_empty());
            if !cert.is_proved() || !sound {
                bad.push(cert.claim.id());
            }
            Out { cert, leaf_boxes: args.leaves.then_some(cert.leaf_boxes.as_slice()), soundness }
        })
        .collect();
    let proved = certs.len() - bad.len();
    let report = Report::new(json!({ "proved": proved, "total": certs.len(), "certificates": out }));
    Ok(report.fail_if(!bad.is_empty(), || format!("not proved: {}", bad.join(", "))))
}

fn execute(cli: &Cli, config: &mut Value, notices: &mut Vec<String>) -> Result<Report, Usage> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Bounds(_)) {
        return Err(Usage("CSV output is only available for `bounds`".into()));
    }
    let c_star = radtail::constants().c_star;
    Ok(match &cli.command {
        Command::Constants { c_l } => Report::new(Constants::with_c_l(*c_l)?),
        Command::Tail(p) => {
            let w = weights(&p.weights, notices)?;
            let t = tail_count(&w, p.x, DEFAULT_TIE_EPS)?;
            Report::new(json!({
                "weights": w.weights(),
                "x": p.x,
                "tail": t.probability(),
                "count": t.count,
                "n": t.n,
            }))
        }
        Command::Bounds(p) => {
            let w = weights(&p.weights, notices)?;
            let r = ratio(&w, p.x)?;
            let mut rows = vec![("exact".to_string(), r.exact), ("gaussian_tail".to_string(), r.gauss_tail)];
            rows.extend(bound_table(p.x, w.tau()));
            let csv = rows.iter().fold(String::from("name,value\n"), |acc, (n, v)| acc + &format!("{n},{v}\n"));
            let low: Vec<&str> = r.violations(BOUND_SLACK).iter().map(|v| v.0).collect();
            let rows: Vec<Value> = rows.iter().map(|(name, value)| json!({ "name": name, "value": value })).collect();
            let report = Report { csv: Some(csv), ..Report::new(json!({ "weights": w.weights(), "x": p.x, "rows": rows })) };
            report.fail_if(!low.is_empty(), || format!("bounds below the exact tail: {}", low.join(", ")))
        }
        Command::Ratio(p) => {
            let w = weights(&p.weights, notices)?;
            let r = ratio(&w, p.x)?;
            let low: Vec<String> = r.violations(BOUND_SLACK).iter().map(|v| v.0.to_string()).collect();
            let above = r.ratio.is_some_and(|q| q > c_star * (1.0 + RATIO_SLACK));
            Report::new(&r)
                .fail_if(above, || format!("ratio {:?} exceeds c* = {c_star}", r.ratio))
                .fail_if(!low.is_empty(), || format!("bounds below the exact tail: {}", low.join(", ")))
        }
        Command::Chain { weights: raw, k_max } => {
            let w = weights(raw, notices)?;
            let r = chebyshev_chain(&w, *k_max)?;
            Report::new(json!({ "weights": w.weights(), "chain": r }))
                .fail_if(r.slack < 0.0, || format!("chain sum {} exceeds 1/2", r.sum))
        }
        Command::Certify(args) => certify(args, config)?,
        Command::Search { n, step, refine, iters, seed } => {
            let grid = grid_search(*n, *step)?;
            let refined = if *refine { Some(local_search(&grid.best_weights, *iters, *seed)?) } else { None };
            let best = refined.as_ref().map_or(grid.best_ratio, |r| r.best_ratio);
            Report::new(json!({ "c_star": c_star, "grid": grid, "refined": refined }))
                .fail_if(best > c_star * (1.0 + RATIO_SLACK), || format!("ratio {best} exceeds c* = {c_star}"))
        }
        Command::Selfnorm { model, n, samples, seed, x } => {
            let m = MagnitudeModel::parse(model, *n)?;
            let e = mc_selfnorm_tail(&m, *samples, *seed, *x)?;
            let exact = match &m.kind {
                Magnitudes::Fixed { values } => Some(exact_selfnorm_tail(values, *x)?),
                _ => None,
            };
            let bound = c_star * normal_tail(*x)?;
            let limit = bound + 4.0 * e.stderr;
            let pass = e.estimate <= limit;
            config["model"] = to_value(&m);
            Report::new(json!({
                "estimate": e.estimate,
                "stderr": e.stderr,
                "samples": e.samples,
                "hits": e.hits,
                "exact": exact,
                "bound": bound,
                "limit": limit,
                "pass": pass,
            }))
            .fail_if(!pass, || format!("estimate {} exceeds c* I(x) + 4 stderr = {limit}", e.estimate))
        }
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push_str(&format!("{prefix}: {}\n", parts.join(", ")));
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

fn render(format: Format, config: &Value, report: &Report) -> String {
    match format {
        Format::Json => {
            let doc = json!({ "config": config, "result": report.result });
            serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
        }
        Format::Csv => report.csv.clone().unwrap_or_default(),
        Format::Human => {
            let mut s = String::new();
            flatten("config", config, &mut s);
            flatten("", &report.result, &mut s);
            s
        }
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code:
/// 0 on success, 1 when a verification fails, 2 on a usage error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let mut config = to_value(&cli);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.map_or(0, usize::from)).build();
    let mut notices = Vec::new();
    let result = match &pool {
        Ok(pool) => pool.install(|| execute(&cli, &mut config, &mut notices)),
        Err(e) => Err(Usage(format!("thread pool: {e}"))),
    };
    for n in &notices {
        let _ = writeln!(err, "{n}");
    }
    let report = match result {
        Ok(r) => r,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            return 2;
        }
    };
    let text = render(cli.format, &config, &report);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return 2;
    }
    match &report.failed {
        Some(msg) => {
            let _ = writeln!(err, "verification failed: {msg}");
            1
        }
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_items() {
        assert_eq!(parse_weight(" 0.5"), Ok(0.5));
        assert_eq!(parse_weight("-2e-1"), Ok(-0.2));
        assert!(parse_weight("inf").is_err());
        assert!(parse_weight("").is_err());
    }

    #[test]
    fn claim_names() {
        assert_eq!(check_claim("ALL").unwrap(), "all");
        assert_eq!(check_claim("h-nonpos").unwrap(), "h-nonpos");
        assert!(check_claim("g_below:x").is_err());
    }

    #[test]
    fn human_flattening() {
        let mut s = String::new();
        flatten("", &json!({ "a": { "b": [1, 2] }, "c": [{ "d": "e" }], "f": null }), &mut s);
        assert_eq!(s, "a.b: 1, 2\nc[0].d: e\nf: null\n");
    }
}
