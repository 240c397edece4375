//! Scoring: bit error rates, the binary-entropy secret-information bound,
//! reconciliation efficiency, and decode-time scaling probes.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::codec::{Codec, DecodeOptions};
use crate::error::{check_len, check_probability, Error, Result};
use crate::gf2::hamming_distance;

/// Fraction of positions where `a` and `b` differ.
pub fn qber(a: &[u8], b: &[u8]) -> Result<f64> {
    check_len(a.len(), b.len())?;
    if a.is_empty() {
        return Err(Error::param("qber", "empty strings"));
    }
    Ok(hamming_distance(a, b) as f64 / a.len() as f64)
}

/// Binary entropy in bits, with `0 log 0 = 0`. Arguments outside [0, 1]
/// give NaN.
pub fn h2(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 || p == 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (-p).ln_1p() / std::f64::consts::LN_2)
}

/// Secret information per symbol left after an error rate `delta`:
/// `1 + (1 - delta) log2(1 - delta) + delta log2(delta)`.
pub fn secret_info_bound(delta: f64) -> Result<f64> {
    let delta = check_probability("delta", delta)?;
    Ok(1.0 - h2(delta))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecretInfoPoint {
    pub delta: f64,
    pub bound: f64,
}

impl SecretInfoPoint {
    pub fn at(delta: f64) -> Result<Self> {
        Ok(Self {
            delta,
            bound: secret_info_bound(delta)?,
        })
    }
}

/// `leakage_bits / (n h2(qber_before))`; 1 is the Slepian-Wolf limit.
pub fn efficiency(leakage_bits: usize, n: usize, qber_before: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(qber_before > 0.0 && qber_before < 0.5) {
        return Err(Error::param("qber_before", format!("{qber_before} is not in (0, 1/2)")));
    }
    Ok(leakage_bits as f64 / (n as f64 * h2(qber_before)))
}

/// Ordinary least squares line with a 95% half-width on the slope.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// NaN when there are only two points.
    pub slope_half_width: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    check_len(x.len(), y.len())?;
    let k = x.len();
    if k < 2 {
        return Err(Error::param("fit", "need at least two points"));
    }
    let mx = x.iter().sum::<f64>() / k as f64;
    let my = y.iter().sum::<f64>() / k as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("fit", "all x values are equal"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_half_width = if k > 2 {
        let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
        let se = (rss / (k - 2) as f64 / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, (k - 2) as f64)
            .map_err(|e| Error::param("fit", e.to_string()))?
            .inverse_cdf(0.975);
        t * se
    } else {
        f64::NAN
    };
    Ok(LinearFit {
        slope,
        intercept,
        slope_half_width,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub n: usize,
    pub median: Duration,
    pub samples: Vec<Duration>,
}

/// Result of [`complexity_probe`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    pub rows: Vec<TimingRow>,
    /// Slope of `ln t` against `ln n`.
    pub exponent: LinearFit,
    /// Slope of `ln(t / ln n)` against `ln n`: 1 for `n log n` growth.
    pub log_corrected_exponent: LinearFit,
    pub environment: String,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeOptions {
    pub trials: usize,
    pub iterations: usize,
    pub prior_flip: f64,
    pub seed: u64,
}

/// Times single-threaded decodes at several block lengths.
///
/// `build(n)` returns a code of block length close to `n`; the fit uses the
/// actual block lengths. Decoding runs a fixed number of iterations with
/// early stopping off, on random errors at `prior_flip`. Each size is timed
/// `trials` times after one warm-up decode and the median is fitted.
pub fn complexity_probe<F>(build: F, sizes: &[usize], opts: &ProbeOptions) -> Result<ScalingFit>
where
    F: Fn(usize) -> Result<Codec>,
{
    if sizes.len() < 3 {
        return Err(Error::param("sizes", "need at least three sizes"));
    }
    let (lo, hi) = (*sizes.iter().min().unwrap(), *sizes.iter().max().unwrap());
    if lo == 0 || (hi as f64) < 100.0 * lo as f64 {
        return Err(Error::param("sizes", "sizes must span at least two decades"));
    }
    if opts.trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    let decode = DecodeOptions {
        iterations: Some(opts.iterations),
        early_stop: false,
        record_history: false,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let codecs: Vec<Codec> = sizes.iter().map(|&n| build(n)).collect::<Result<_>>()?;
    let mut samples: Vec<Vec<Duration>> = vec![Vec::with_capacity(opts.trials); codecs.len()];
    // Sizes are timed round-robin so drift in machine speed hits all of them.
    for trial in 0..=opts.trials {
        for (codec, times) in codecs.iter().zip(samples.iter_mut()) {
            let n = codec.block_len();
            let e: Vec<u8> = (0..n).map(|_| rng.random_bool(opts.prior_flip) as u8).collect();
            let z = codec.syndrome(&e)?;
            let start = Instant::now();
            let out = codec.decode(&z, opts.prior_flip, &decode)?;
            let elapsed = start.elapsed();
            std::hint::black_box(out);
            if trial > 0 {
                times.push(elapsed);
            }
        }
    }
    let rows: Vec<TimingRow> = codecs
        .iter()
        .zip(samples)
        .map(|(codec, samples)| {
            let mut sorted = samples.clone();
            sorted.sort();
            TimingRow {
                n: codec.block_len(),
                median: sorted[sorted.len() / 2],
                samples,
            }
        })
        .collect();
    let ln_n: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ln_t: Vec<f64> = rows.iter().map(|r| r.median.as_secs_f64().ln()).collect();
    let ln_t_corr: Vec<f64> = ln_t.iter().zip(&ln_n).map(|(t, n)| t - n.ln()).collect();
    Ok(ScalingFit {
        exponent: fit_line(&ln_n, &ln_t)?,
        log_corrected_exponent: fit_line(&ln_n, &ln_t_corr)?,
        environment: environment(),
        rows,
    })
}

fn environment() -> String {
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    format!(
        "{}-{}, {cores} logical cores available, timed on 1 thread, {} build",
        std::env::consts::OS,
        std::env::consts::ARCH,
        if cfg!(debug_assertions) { "debug" } else { "optimized" },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn qber_examples() {
        assert_eq!(qber(&[1, 0, 1], &[1, 0, 1]).unwrap(), 0.0);
        assert_eq!(qber(&[1, 0, 1], &[0, 1, 0]).unwrap(), 1.0);
        assert_eq!(qber(&[0; 8], &[0, 0, 0, 1, 0, 0, 0, 0]).unwrap(), 0.125);
        assert!(qber(&[], &[]).is_err());
        assert!(qber(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(secret_info_bound(0.0).unwrap(), 1.0);
        assert_eq!(secret_info_bound(1.0).unwrap(), 1.0);
        assert_eq!(secret_info_bound(0.5).unwrap(), 0.0);
        // Arbitrary-precision reference: 1 - h2(0.11) = 0.5000840418...
        assert!((secret_info_bound(0.11).unwrap() - 0.500_084_041_8).abs() < 1e-10);
        assert!(secret_info_bound(-0.1).is_err());
        assert!(secret_info_bound(1.1).is_err());
        let pt = SecretInfoPoint::at(0.25).unwrap();
        assert!(pt.bound <= 1.0);
    }

    #[test]
    fn efficiency_examples() {
        let q = 0.07;
        let n = 1000;
        let leak = n as f64 * h2(q);
        assert!((efficiency(leak.round() as usize, n, q).unwrap() - leak.round() / leak).abs() < 1e-12);
        // Rate 1/9 code leaks 8/9 of the block.
        let e = efficiency(3200, 3600, 0.11).unwrap();
        assert!((e - 1.778_076_643_4).abs() < 1e-9, "{e}");
        assert!(efficiency(10, 100, 0.0).is_err());
        assert!(efficiency(10, 0, 0.1).is_err());
    }

    #[test]
    fn h2_reference_values() {
        assert!((h2(0.15) - 0.609_840_304_7).abs() < 1e-10);
        assert!(h2(1.5).is_nan());
    }

    #[test]
    fn fit_recovers_exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let f = fit_line(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.intercept + 1.0).abs() < 1e-12);
        assert!(f.slope_half_width.abs() < 1e-9);
        assert!(fit_line(&[1.0, 1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn probe_rejects_too_few_sizes() {
        let opts = ProbeOptions {
            trials: 1,
            iterations: 1,
            prior_flip: 0.05,
            seed: 0,
        };
        let build = |_n: usize| -> Result<Codec> { unreachable!() };
        assert!(complexity_probe(build, &[1000], &opts).is_err());
        assert!(complexity_probe(build, &[1000, 2000, 5000], &opts).is_err());
    }

    proptest! {
        #[test]
        fn bound_is_symmetric_and_bounded(d in 0.0f64..=1.0) {
            let a = secret_info_bound(d).unwrap();
            let b = secret_info_bound(1.0 - d).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&a));
        }

        #[test]
        fn qber_is_a_metric(
            a in proptest::collection::vec(0u8..2, 32),
            b in proptest::collection::vec(0u8..2, 32),
            c in proptest::collection::vec(0u8..2, 32),
        ) {
            prop_assert_eq!(qber(&a, &b).unwrap(), qber(&b, &a).unwrap());
            prop_assert_eq!(qber(&a, &a).unwrap(), 0.0);
            prop_assert!(qber(&a, &c).unwrap() <= qber(&a, &b).unwrap() + qber(&b, &c).unwrap() + 1e-15);
        }
    }
}
