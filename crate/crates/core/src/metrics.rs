//! Compression ratio, optimization rate and the random-image sweep.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::bitplane::{random_image, ImageError, ImagePlanes, MAX_ORDER};
use crate::circuit::{coefficient_cost, CostModel};
use crate::rm_transform::pprm_forward;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("non-optimized cost is zero")]
    ZeroBaseline,
    #[error("optimized cost is zero")]
    ZeroOptimizedCost,
    #[error(
        "order range {n_min}..={n_max} invalid (must satisfy 1 <= n_min <= n_max <= {MAX_ORDER})"
    )]
    InvalidRange { n_min: u32, n_max: u32 },
    #[error("sweep needs at least one seed")]
    NoSeeds,
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error("record line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// `(1 − optimized / non-optimized) · 100`.
pub fn compression_ratio(qc_nonopt: u128, qc_opt: u128) -> Result<f64, MetricsError> {
    if qc_nonopt == 0 {
        return Err(MetricsError::ZeroBaseline);
    }
    Ok((1.0 - qc_opt as f64 / qc_nonopt as f64) * 100.0)
}

/// `non-optimized / optimized`.
pub fn optimization_rate(qc_nonopt: u128, qc_opt: u128) -> Result<f64, MetricsError> {
    if qc_opt == 0 {
        return Err(MetricsError::ZeroOptimizedCost);
    }
    Ok(qc_nonopt as f64 / qc_opt as f64)
}

/// Costs of the minterm (non-optimized) and PPRM (optimized) circuits of a
/// set of planes, computed from the coefficients without materializing gates.
pub fn measure(planes: &ImagePlanes, model: CostModel, polarity_x: bool) -> (u128, u128) {
    planes
        .planes()
        .par_iter()
        .map(|plane| {
            (
                coefficient_cost(plane, model, polarity_x),
                coefficient_cost(&pprm_forward(plane), model, polarity_x),
            )
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Rounds to six significant digits, the precision used for every real value
/// in CSV and JSON output.
pub fn round_sig6(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

fn serialize_sig6<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig6(*x))
}

/// One random-image measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub m: u32,
    pub n: u32,
    pub q: u32,
    pub seed: u64,
    pub model: CostModel,
    pub qc_nonopt: u128,
    pub qc_opt: u128,
    #[serde(serialize_with = "serialize_sig6")]
    pub rate: f64,
    #[serde(serialize_with = "serialize_sig6")]
    pub ratio_percent: f64,
}

impl SweepRecord {
    pub fn new(
        n: u32,
        q: u32,
        seed: u64,
        model: CostModel,
        qc_nonopt: u128,
        qc_opt: u128,
    ) -> Result<Self, MetricsError> {
        Ok(Self {
            m: 2 * n,
            n,
            q,
            seed,
            model,
            qc_nonopt,
            qc_opt,
            rate: optimization_rate(qc_nonopt, qc_opt)?,
            ratio_percent: compression_ratio(qc_nonopt, qc_opt)?,
        })
    }

    /// True when the PPRM circuit costs more than the minterm circuit.
    pub fn is_regression(&self) -> bool {
        self.qc_opt > self.qc_nonopt
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub n_min: u32,
    pub n_max: u32,
    pub q: u32,
    pub seeds: Vec<u64>,
    pub model: CostModel,
}

impl SweepConfig {
    /// Seeds `0..count`.
    pub fn with_seed_count(n_min: u32, n_max: u32, q: u32, count: u64, model: CostModel) -> Self {
        Self {
            n_min,
            n_max,
            q,
            seeds: (0..count).collect(),
            model,
        }
    }
}

/// Measures one random image per `(n, seed)`, returned in `(n, seed)` order
/// with seeds in the order given.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>, MetricsError> {
    let SweepConfig {
        n_min,
        n_max,
        q,
        ref seeds,
        model,
    } = *config;
    if n_min < 1 || n_min > n_max || n_max > MAX_ORDER {
        return Err(MetricsError::InvalidRange { n_min, n_max });
    }
    if seeds.is_empty() {
        return Err(MetricsError::NoSeeds);
    }
    let jobs: Vec<(u32, u64)> = (n_min..=n_max)
        .flat_map(|n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    jobs.into_par_iter()
        .map(|(n, seed)| {
            let planes = crate::bitplane::extract_planes(&random_image(n, q, seed)?);
            let (nonopt, opt) = measure(&planes, model, false);
            SweepRecord::new(n, q, seed, model, nonopt, opt)
        })
        .collect()
}

/// Mean and sample standard deviation per `(m, model)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub m: u32,
    pub model: CostModel,
    pub samples: usize,
    #[serde(serialize_with = "serialize_sig6")]
    pub rate_mean: f64,
    #[serde(serialize_with = "serialize_sig6")]
    pub rate_std: f64,
    #[serde(serialize_with = "serialize_sig6")]
    pub ratio_mean: f64,
    #[serde(serialize_with = "serialize_sig6")]
    pub ratio_std: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Groups records by `(m, model)` in order of first appearance.
pub fn summarize(records: &[SweepRecord]) -> Vec<SweepSummary> {
    let mut keys: Vec<(u32, CostModel)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.m, r.model)) {
            keys.push((r.m, r.model));
        }
    }
    keys.into_iter()
        .map(|(m, model)| {
            let group: Vec<&SweepRecord> = records
                .iter()
                .filter(|r| r.m == m && r.model == model)
                .collect();
            let rates: Vec<f64> = group.iter().map(|r| r.rate).collect();
            let ratios: Vec<f64> = group.iter().map(|r| r.ratio_percent).collect();
            let (rate_mean, rate_std) = mean_std(&rates);
            let (ratio_mean, ratio_std) = mean_std(&ratios);
            SweepSummary {
                m,
                model,
                samples: group.len(),
                rate_mean,
                rate_std,
                ratio_mean,
                ratio_std,
            }
        })
        .collect()
}

pub const RECORD_CSV_HEADER: &str = "m,n,q,seed,model,qc_nonopt,qc_opt,rate,ratio_percent";
pub const SUMMARY_CSV_HEADER: &str = "m,model,samples,rate_mean,rate_std,ratio_mean,ratio_std";

pub fn records_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(RECORD_CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.m,
            r.n,
            r.q,
            r.seed,
            r.model,
            r.qc_nonopt,
            r.qc_opt,
            round_sig6(r.rate),
            round_sig6(r.ratio_percent)
        );
    }
    out
}

pub fn summaries_to_csv(summaries: &[SweepSummary]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for s in summaries {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.m,
            s.model,
            s.samples,
            round_sig6(s.rate_mean),
            round_sig6(s.rate_std),
            round_sig6(s.ratio_mean),
            round_sig6(s.ratio_std)
        );
    }
    out
}

/// Reads records back from either the CSV or the JSON output format.
pub fn parse_records(text: &str) -> Result<Vec<SweepRecord>, MetricsError> {
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(text).map_err(|e| MetricsError::Parse {
            line: e.line(),
            reason: e.to_string(),
        });
    }
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == RECORD_CSV_HEADER => {}
        Some((i, header)) => {
            return Err(MetricsError::Parse {
                line: i + 1,
                reason: format!("unexpected header {header:?}"),
            })
        }
        None => return Ok(Vec::new()),
    }
    lines.map(|(i, l)| parse_csv_record(l, i + 1)).collect()
}

fn parse_csv_record(line: &str, lineno: usize) -> Result<SweepRecord, MetricsError> {
    let bad = |reason: String| MetricsError::Parse {
        line: lineno,
        reason,
    };
    let fields: Vec<&str> = line.trim().split(',').collect();
    if fields.len() != 9 {
        return Err(bad(format!("expected 9 fields, found {}", fields.len())));
    }
    fn num<T: std::str::FromStr>(s: &str, name: &str) -> Result<T, String> {
        s.parse()
            .map_err(|_| format!("field {name}: cannot parse {s:?}"))
    }
    Ok(SweepRecord {
        m: num(fields[0], "m").map_err(bad)?,
        n: num(fields[1], "n").map_err(bad)?,
        q: num(fields[2], "q").map_err(bad)?,
        seed: num(fields[3], "seed").map_err(bad)?,
        model: fields[4].parse().map_err(bad)?,
        qc_nonopt: num(fields[5], "qc_nonopt").map_err(bad)?,
        qc_opt: num(fields[6], "qc_opt").map_err(bad)?,
        rate: num(fields[7], "rate").map_err(bad)?,
        ratio_percent: num(fields[8], "ratio_percent").map_err(bad)?,
    })
}
