//! Sum-product syndrome decoding in the log-likelihood-ratio domain.
//!
//! LLRs are `ln(P(bit = 0) / P(bit = 1))`. Check `c` carries parity `z[c]`, so
//! its outgoing messages are sign-flipped when `z[c] = 1`. Schedule is
//! flooding: all checks, then all variables.

use super::ParityCheckMatrix;
use crate::error::{check_len, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BpOptions {
    pub max_iter: usize,
    /// Symmetric clip applied to every message and posterior.
    pub llr_clip: f64,
    /// Stop as soon as the hard decision reproduces the syndrome.
    pub early_stop: bool,
    /// Keep the hard decision of every iteration in [`BpOutput::history`],
    /// filled forward to `max_iter` entries after an early stop.
    pub record_history: bool,
}

impl Default for BpOptions {
    fn default() -> Self {
        Self {
            max_iter: 50,
            llr_clip: 25.0,
            early_stop: true,
            record_history: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BpDecodeTrace {
    pub iterations_used: usize,
    pub converged: bool,
    pub residual_unsatisfied_checks: usize,
}

#[derive(Clone, Debug)]
pub struct BpOutput {
    pub error_estimate: Vec<u8>,
    pub trace: BpDecodeTrace,
    pub posterior_llr: Vec<f64>,
    pub history: Vec<Vec<u8>>,
    /// Unsatisfied checks after each recorded iteration.
    pub unsatisfied_history: Vec<usize>,
}

impl BpOutput {
    /// Posterior probability that each position is in error.
    pub fn posterior_flip_probabilities(&self) -> Vec<f64> {
        self.posterior_llr.iter().map(|&l| 1.0 / (1.0 + l.exp())).collect()
    }
}

pub struct BpDecoder<'a> {
    h: &'a ParityCheckMatrix,
    opts: BpOptions,
}

impl<'a> BpDecoder<'a> {
    pub fn new(h: &'a ParityCheckMatrix, opts: BpOptions) -> Self {
        Self { h, opts }
    }

    pub fn decode(&self, z: &[u8], prior_flip: f64) -> Result<BpOutput> {
        let h = self.h;
        check_len(h.m(), z.len())?;
        if !(prior_flip > 0.0 && prior_flip < 0.5) {
            return Err(Error::param("prior_flip", format!("{prior_flip} is not in (0, 1/2)")));
        }
        if self.opts.max_iter == 0 {
            return Err(Error::param("max_iter", "must be at least 1"));
        }
        let clip = self.opts.llr_clip;
        let prior_llr = ((1.0 - prior_flip) / prior_flip).ln().min(clip);
        let n_edges = h.n_edges();
        let mut v2c = vec![prior_llr; n_edges];
        let mut c2v = vec![0.0f64; n_edges];
        let mut total = vec![prior_llr; h.n()];
        let mut estimate = vec![0u8; h.n()];
        let mut history = Vec::new();
        let mut unsatisfied_history = Vec::new();
        // Scratch for exclude-one products.
        let mut t = Vec::new();
        let mut suffix = Vec::new();

        let mut trace = BpDecodeTrace {
            iterations_used: 0,
            converged: false,
            residual_unsatisfied_checks: h.m(),
        };
        for it in 1..=self.opts.max_iter {
            for c in 0..h.m() {
                let range = h.check_edge_range(c);
                t.clear();
                t.extend(v2c[range.clone()].iter().map(|&l| (0.5 * l).tanh()));
                suffix.clear();
                suffix.resize(t.len() + 1, 1.0);
                for i in (0..t.len()).rev() {
                    suffix[i] = suffix[i + 1] * t[i];
                }
                let sign = if z[c] == 1 { -1.0 } else { 1.0 };
                let mut prefix = 1.0;
                for (i, e) in range.enumerate() {
                    let prod = (prefix * suffix[i + 1]).clamp(-1.0 + 1e-16, 1.0 - 1e-16);
                    c2v[e] = (sign * 2.0 * prod.atanh()).clamp(-clip, clip);
                    prefix *= t[i];
                }
            }
            for v in 0..h.n() {
                let edges = h.var_edge_ids(v);
                let sum: f64 = prior_llr + edges.iter().map(|&e| c2v[e as usize]).sum::<f64>();
                total[v] = sum.clamp(-clip, clip);
                for &e in edges {
                    v2c[e as usize] = (sum - c2v[e as usize]).clamp(-clip, clip);
                }
                // LLR exactly 0 resolves to 0.
                estimate[v] = (total[v] < 0.0) as u8;
            }
            let unsatisfied = h.unsatisfied(&estimate, z);
            if self.opts.record_history {
                history.push(estimate.clone());
                unsatisfied_history.push(unsatisfied);
            }
            trace = BpDecodeTrace {
                iterations_used: it,
                converged: unsatisfied == 0,
                residual_unsatisfied_checks: unsatisfied,
            };
            if trace.converged && self.opts.early_stop {
                break;
            }
        }
        // After an early stop the estimate no longer changes.
        if self.opts.record_history {
            while history.len() < self.opts.max_iter {
                history.push(estimate.clone());
                unsatisfied_history.push(trace.residual_unsatisfied_checks);
            }
        }
        Ok(BpOutput {
            error_estimate: estimate,
            trace,
            posterior_llr: total,
            history,
            unsatisfied_history,
        })
    }
}

/// Decodes the most likely error pattern with syndrome `z` under an i.i.d.
/// flip prior, with default clipping and early stopping.
pub fn bp_syndrome_decode(
    h: &ParityCheckMatrix,
    z: &[u8],
    prior_flip: f64,
    max_iter: usize,
) -> Result<(Vec<u8>, BpDecodeTrace)> {
    let opts = BpOptions {
        max_iter,
        ..BpOptions::default()
    };
    let out = BpDecoder::new(h, opts).decode(z, prior_flip)?;
    Ok((out.error_estimate, out.trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldpc::build_regular;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_syndrome_converges_in_one_iteration() {
        let h = build_regular(96, 3, 6, 6, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let (e, trace) = bp_syndrome_decode(&h, &vec![0; h.m()], 0.05, 50).unwrap();
        assert!(e.iter().all(|&b| b == 0));
        assert_eq!(trace.iterations_used, 1);
        assert!(trace.converged);
        assert_eq!(trace.residual_unsatisfied_checks, 0);
    }

    #[test]
    fn converged_estimates_reproduce_syndrome() {
        let h = build_regular(240, 3, 6, 6, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let mut e = vec![0u8; 240];
        for i in [5, 77, 160] {
            e[i] = 1;
        }
        let z = h.syndrome(&e).unwrap();
        let (est, trace) = bp_syndrome_decode(&h, &z, 0.02, 50).unwrap();
        assert!(trace.converged);
        assert_eq!(h.syndrome(&est).unwrap(), z);
        assert_eq!(est, e);
    }

    #[test]
    fn precondition_errors() {
        let h = build_regular(12, 2, 4, 4, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(bp_syndrome_decode(&h, &[0; 5], 0.1, 10).is_err());
        assert!(bp_syndrome_decode(&h, &[0; 6], 0.5, 10).is_err());
        assert!(bp_syndrome_decode(&h, &[0; 6], 0.0, 10).is_err());
        assert!(bp_syndrome_decode(&h, &[0; 6], 0.1, 0).is_err());
    }

    #[test]
    fn history_records_each_iteration() {
        let h = build_regular(48, 3, 6, 6, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let opts = BpOptions {
            max_iter: 7,
            early_stop: false,
            record_history: true,
            ..BpOptions::default()
        };
        let out = BpDecoder::new(&h, opts).decode(&vec![0; h.m()], 0.1).unwrap();
        assert_eq!(out.history.len(), 7);
        assert_eq!(out.trace.iterations_used, 7);
    }
}
