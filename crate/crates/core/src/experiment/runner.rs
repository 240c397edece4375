//! Grid sweeps: exchange, reconcile and score every (grid point, trial).

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::config::{ExperimentConfig, PriorSource};
use super::seed::{code_seed, trial_seed};
use crate::bb84::{estimate_parameters, run_exchange};
use crate::channels::{analytic_sifted_qber, ChannelStack, DepolarizingParams, InterceptResendParams};
use crate::codec::{preset, Codec, DecodeOptions};
use crate::error::{Error, Result};
use crate::metrics::secret_info_bound;
use crate::reconcile::{decoder_prior, rate_check, reconcile, RateAdvice, ReconcileConfig};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 15] = [
    "p",
    "s",
    "codec",
    "block_n",
    "iterations",
    "interleaver",
    "trial",
    "seed",
    "qber_pre",
    "qber_post",
    "leakage_bits",
    "secret_bound_pre",
    "secret_bound_post",
    "claimed_success",
    "wall_ms",
];

/// One CSV line: a trial at a grid point and iteration cap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub p: f64,
    pub s: f64,
    pub codec: String,
    pub block_n: usize,
    pub iterations: usize,
    pub interleaver: String,
    pub trial: usize,
    pub seed: u64,
    pub qber_pre: f64,
    pub qber_post: f64,
    pub leakage_bits: usize,
    pub secret_bound_pre: f64,
    pub secret_bound_post: f64,
    pub claimed_success: bool,
    /// Blank unless timing was requested, so default output is reproducible.
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub p: f64,
    pub s: f64,
}

/// Grid points in row-major order: `p` outer, `s` inner.
pub fn grid(config: &ExperimentConfig) -> Vec<GridPoint> {
    let mut out = Vec::with_capacity(config.p_grid.len() * config.s_grid.len());
    for &p in &config.p_grid {
        for &s in &config.s_grid {
            out.push(GridPoint { index: out.len(), p, s });
        }
    }
    out
}

/// Mean and 95% half-width per grid point and iteration cap.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSummary {
    pub p: f64,
    pub s: f64,
    pub iterations: usize,
    pub trials: usize,
    pub qber_pre_mean: f64,
    pub qber_pre_half_width: f64,
    pub qber_post_mean: f64,
    pub qber_post_half_width: f64,
    pub claimed_fraction: f64,
    pub advice: RateAdvice,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub rows: Vec<ResultRow>,
    pub summary: Vec<PointSummary>,
    /// Points where the code leaks less than the predicted error entropy.
    pub warnings: Vec<String>,
}

/// Builds the configured preset with the configuration's code seed.
pub fn build_codec(config: &ExperimentConfig) -> Result<Codec> {
    preset(&config.codec_preset, config.interleaver()?, code_seed(config.master_seed))
}

fn analytic_qber(p: f64, s: f64) -> Result<f64> {
    Ok(analytic_sifted_qber(DepolarizingParams::new(p)?, InterceptResendParams::new(s)?))
}

fn run_trial(
    config: &ExperimentConfig,
    codec: &Codec,
    point: GridPoint,
    trial: usize,
    iteration_caps: &[usize],
) -> Result<Vec<ResultRow>> {
    let seed = trial_seed(config.master_seed, point.index, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stack = ChannelStack::eve_then_channel(point.p, point.s)?;
    let mut pair = run_exchange(config.n_qubits, &stack, &mut rng)?;
    let mut estimate = None;
    if config.disclose_fraction > 0.0 {
        let est = estimate_parameters(&pair, config.disclose_fraction, &mut rng)?;
        estimate = Some(est.qber_estimate);
        pair = est.remaining_pair;
    }
    let prior = decoder_prior(match (config.prior, estimate) {
        (PriorSource::Estimated, Some(q)) => q,
        _ => analytic_qber(point.p, point.s)?,
    });
    let sweep = iteration_caps.len() > 1;
    let cap = iteration_caps.iter().copied().max();
    let rc = ReconcileConfig {
        direction: config.direction()?,
        decode: DecodeOptions {
            iterations: cap,
            early_stop: !sweep,
            record_history: sweep,
        },
        parallel: false,
    };
    let report = reconcile(&pair, codec, prior, &rc).map_err(|e| match e {
        Error::InvalidParameter { name: "pair", reason } => {
            Error::Config(format!("n_qubits too small: {reason}"))
        }
        other => other,
    })?;
    let wall_ms = config.record_timing.then(|| report.wall_time.as_secs_f64() * 1e3);
    let iterations: Vec<usize> = if sweep {
        iteration_caps.to_vec()
    } else {
        vec![cap.unwrap_or(codec.default_iterations())]
    };
    iterations
        .into_iter()
        .map(|it| {
            let (qber_post, claimed) = if sweep {
                (report.iterations_trace[it - 1], report.claimed_trace[it - 1])
            } else {
                (report.qber_after, report.claimed_success)
            };
            Ok(ResultRow {
                p: point.p,
                s: point.s,
                codec: codec.name().to_string(),
                block_n: codec.block_len(),
                iterations: it,
                interleaver: config.interleaver()?.to_string(),
                trial,
                seed,
                qber_pre: report.qber_before,
                qber_post,
                leakage_bits: report.leakage_bits,
                secret_bound_pre: secret_info_bound(report.qber_before)?,
                secret_bound_post: secret_info_bound(qber_post)?,
                claimed_success: claimed,
                wall_ms,
            })
        })
        .collect()
}

fn execute(config: &ExperimentConfig, codec: &Codec, iteration_caps: &[usize]) -> Result<RunOutput> {
    config.validate()?;
    let points = grid(config);
    let tasks: Vec<(GridPoint, usize)> = points
        .iter()
        .flat_map(|&pt| (0..config.trials).map(move |t| (pt, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let nested: Vec<Vec<ResultRow>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(pt, t)| run_trial(config, codec, pt, t, iteration_caps))
            .collect::<Result<_>>()
    })?;
    let rows: Vec<ResultRow> = nested.into_iter().flatten().collect();

    let mut warnings = Vec::new();
    for pt in &points {
        let q = analytic_qber(pt.p, pt.s)?;
        let check = rate_check(codec, q);
        if check.advice != RateAdvice::Feasible {
            warnings.push(format!(
                "p={} s={}: {} leaks {:.4} bits/bit against h2 = {:.4} ({:?})",
                pt.p,
                pt.s,
                codec.name(),
                check.leak_rate,
                check.entropy,
                check.advice
            ));
        }
    }
    Ok(RunOutput {
        summary: summarize(&rows, codec)?,
        rows,
        warnings,
    })
}

/// Runs every grid point with the configured iteration cap.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let codec = build_codec(config)?;
    run_with_codec(config, &codec)
}

pub fn run_with_codec(config: &ExperimentConfig, codec: &Codec) -> Result<RunOutput> {
    let caps: Vec<usize> = config.iterations.into_iter().collect();
    execute(config, codec, &caps)
}

/// Decodes each trial once with the largest cap in `iteration_list` and
/// reports the residual error after every listed iteration count, one row
/// per count. Early stopping is off so every count is observed.
pub fn sweep_iterations(config: &ExperimentConfig) -> Result<RunOutput> {
    let codec = build_codec(config)?;
    sweep_iterations_with_codec(config, &codec)
}

pub fn sweep_iterations_with_codec(config: &ExperimentConfig, codec: &Codec) -> Result<RunOutput> {
    let mut caps = config.iteration_list.clone();
    caps.sort_unstable();
    caps.dedup();
    if caps.len() < 2 {
        return Err(Error::Config(
            "iteration_list needs at least two distinct values".into(),
        ));
    }
    execute(config, codec, &caps)
}

fn mean_half_width(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let t = StudentsT::new(0.0, 1.0, n - 1.0)
        .map(|d| d.inverse_cdf(0.975))
        .unwrap_or(f64::NAN);
    (mean, t * (var / n).sqrt())
}

/// Per-(p, s, iterations) means in first-appearance order.
pub fn summarize(rows: &[ResultRow], codec: &Codec) -> Result<Vec<PointSummary>> {
    let mut keys: Vec<(f64, f64, usize)> = Vec::new();
    for r in rows {
        let k = (r.p, r.s, r.iterations);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(p, s, it)| {
            let sel: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.p == p && r.s == s && r.iterations == it)
                .collect();
            let pre: Vec<f64> = sel.iter().map(|r| r.qber_pre).collect();
            let post: Vec<f64> = sel.iter().map(|r| r.qber_post).collect();
            let (qber_pre_mean, qber_pre_half_width) = mean_half_width(&pre);
            let (qber_post_mean, qber_post_half_width) = mean_half_width(&post);
            Ok(PointSummary {
                p,
                s,
                iterations: it,
                trials: sel.len(),
                qber_pre_mean,
                qber_pre_half_width,
                qber_post_mean,
                qber_post_half_width,
                claimed_fraction: sel.iter().filter(|r| r.claimed_success).count() as f64
                    / sel.len() as f64,
                advice: rate_check(codec, analytic_qber(p, s)?).advice,
            })
        })
        .collect()
}

/// Serializes rows with the fixed header.
pub fn csv_bytes(rows: &[ResultRow]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Schema(e.to_string()))
}

/// Writes the CSV through a temporary file in the target directory and
/// renames it into place.
pub fn write_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let bytes = csv_bytes(rows)?;
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(&bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Reads rows back, checking the header.
pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Schema(format!(
            "{}: header {:?} does not match schema version {SCHEMA_VERSION}",
            path.display(),
            header
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Schema(format!("{}: {e}", path.display()))))
        .collect()
}
