//! One-way syndrome reconciliation of a sifted key pair.
//!
//! The sender publishes the syndrome of each block of its key. The receiver
//! XORs it with the syndrome of its own block, which equals the syndrome of
//! the error pattern, decodes that pattern and flips its bits. Only whole
//! blocks are reconciled; the tail shorter than a block is passed through and
//! reported separately.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bb84::SiftedKeyPair;
use crate::codec::{Codec, DecodeOptions, DecodeOutcome};
use crate::error::{Error, Result};
use crate::gf2::{hamming_distance, xor, xor_in_place};
use crate::metrics::h2;

/// Smallest prior handed to a decoder. An exact zero would make every flip
/// impossible.
pub const MIN_PRIOR: f64 = 1e-4;
/// Largest prior handed to a decoder.
pub const MAX_PRIOR: f64 = 0.5 - 1e-6;

/// Clamps an error-rate guess into the range decoders accept.
pub fn decoder_prior(q: f64) -> f64 {
    if q.is_nan() {
        return MIN_PRIOR;
    }
    q.clamp(MIN_PRIOR, MAX_PRIOR)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Direction {
    /// Alice publishes, Bob corrects.
    #[default]
    Forward,
    /// Bob publishes, Alice corrects.
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ReconcileConfig {
    pub direction: Direction,
    pub decode: DecodeOptions,
    /// Decode blocks on the rayon pool instead of sequentially.
    pub parallel: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconciliationReport {
    /// The correcting party's key after correction, remainder included.
    pub corrected_key: Vec<u8>,
    /// Every block matches the publishing party exactly (simulation only).
    pub success: bool,
    /// Every block estimate reproduces its syndrome.
    pub claimed_success: bool,
    pub blocks: usize,
    pub block_len: usize,
    pub leakage_bits: usize,
    /// Error rate over the reconciled (whole-block) positions.
    pub qber_before: f64,
    pub qber_after: f64,
    pub remainder_bits: usize,
    /// Errors left in the uncorrected remainder.
    pub remainder_errors: usize,
    /// Residual error rate over the reconciled positions after each
    /// iteration; empty unless history recording was requested.
    pub iterations_trace: Vec<f64>,
    /// Whether every block reproduced its syndrome after each iteration.
    pub claimed_trace: Vec<bool>,
    /// Iterations used by each block.
    pub iterations_used: Vec<usize>,
    pub wall_time: Duration,
}

/// Reconciles `pair` block by block with `codec` under a flip prior.
pub fn reconcile(
    pair: &SiftedKeyPair,
    codec: &Codec,
    prior_flip: f64,
    config: &ReconcileConfig,
) -> Result<ReconciliationReport> {
    if !(prior_flip > 0.0 && prior_flip < 0.5) {
        return Err(Error::param("prior_flip", format!("{prior_flip} is not in (0, 1/2)")));
    }
    let n = codec.block_len();
    if pair.len() < n {
        return Err(Error::param(
            "pair",
            format!("{} sifted bits is shorter than one block of {n}", pair.len()),
        ));
    }
    let start = Instant::now();
    let (sender, receiver) = match config.direction {
        Direction::Forward => (pair.alice_bits(), pair.bob_bits()),
        Direction::Reverse => (pair.bob_bits(), pair.alice_bits()),
    };
    let blocks = pair.len() / n;
    let scored = blocks * n;

    let decode_block = |b: usize| -> Result<DecodeOutcome> {
        let range = b * n..(b + 1) * n;
        let published = codec.syndrome(&sender[range.clone()])?;
        let zeta = xor(&published, &codec.syndrome(&receiver[range])?);
        codec.decode(&zeta, prior_flip, &config.decode)
    };
    let outcomes: Vec<DecodeOutcome> = if config.parallel {
        (0..blocks).into_par_iter().map(decode_block).collect::<Result<_>>()?
    } else {
        (0..blocks).map(decode_block).collect::<Result<_>>()?
    };

    let mut corrected = receiver.to_vec();
    let truth = pair.ground_truth_error();
    let mut success = true;
    let mut claimed_success = true;
    let mut trace_errors: Vec<usize> = Vec::new();
    let mut claimed_trace: Vec<bool> = Vec::new();
    for (b, out) in outcomes.iter().enumerate() {
        let range = b * n..(b + 1) * n;
        xor_in_place(&mut corrected[range.clone()], &out.estimate);
        success &= out.estimate == truth[range.clone()];
        claimed_success &= out.claimed_success;
        if b == 0 {
            trace_errors = vec![0; out.history.len()];
            claimed_trace = vec![true; out.claimed_history.len()];
        }
        for (acc, &c) in claimed_trace.iter_mut().zip(&out.claimed_history) {
            *acc &= c;
        }
        for (acc, est) in trace_errors.iter_mut().zip(&out.history) {
            *acc += hamming_distance(est, &truth[range.clone()]);
        }
    }
    let errors_before = hamming_distance(&sender[..scored], &receiver[..scored]);
    let errors_after = hamming_distance(&sender[..scored], &corrected[..scored]);
    Ok(ReconciliationReport {
        success,
        claimed_success,
        blocks,
        block_len: n,
        leakage_bits: blocks * codec.syndrome_len(),
        qber_before: errors_before as f64 / scored as f64,
        qber_after: errors_after as f64 / scored as f64,
        remainder_bits: pair.len() - scored,
        remainder_errors: hamming_distance(&sender[scored..], &receiver[scored..]),
        iterations_trace: trace_errors.iter().map(|&e| e as f64 / scored as f64).collect(),
        claimed_trace,
        iterations_used: outcomes.iter().map(|o| o.iterations_used).collect(),
        corrected_key: corrected,
        wall_time: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateAdvice {
    Feasible,
    /// Within 10% of the Slepian-Wolf limit.
    Marginal,
    /// Leaks less than the conditional entropy; decoding cannot succeed
    /// reliably.
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateCheck {
    pub advice: RateAdvice,
    /// Published bits per key bit, `1 - R`.
    pub leak_rate: f64,
    pub entropy: f64,
    /// `leak_rate / entropy`; infinite when the entropy is zero.
    pub ratio: f64,
}

/// Compares the leak rate of a code of rate `rate` with `h2(prior_flip)`.
pub fn rate_check_for_rate(rate: f64, prior_flip: f64) -> RateCheck {
    let leak_rate = 1.0 - rate;
    let entropy = h2(prior_flip.clamp(0.0, 1.0));
    let ratio = if entropy == 0.0 {
        f64::INFINITY
    } else {
        leak_rate / entropy
    };
    let advice = if ratio >= 1.1 {
        RateAdvice::Feasible
    } else if ratio >= 1.0 {
        RateAdvice::Marginal
    } else {
        RateAdvice::Infeasible
    };
    RateCheck {
        advice,
        leak_rate,
        entropy,
        ratio,
    }
}

pub fn rate_check(codec: &Codec, prior_flip: f64) -> RateCheck {
    rate_check_for_rate(codec.rate(), prior_flip)
}
