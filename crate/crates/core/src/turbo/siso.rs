//! Forward-backward (BCJR) soft-in soft-out decoding on a component trellis.
//!
//! The core works on LLRs `ln(P(0)/P(1))` for every trellis input and output
//! bit and runs in the probability domain with per-step normalization, which
//! gives exact per-bit MAP marginals. [`bcjr_siso`] is the probability-domain
//! entry point; syndrome mode decodes an error sequence constrained to the
//! coset selected by a component syndrome by translating the evidence with
//! the coset representative.

use super::conv::{ComponentSyndromeFormer, ConvCodeSpec};
use crate::error::{check_len, Error, Result};

/// Evidence is clamped into this band before use.
pub const EVIDENCE_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug)]
pub(crate) struct Trellis {
    k: usize,
    n: usize,
    memory: usize,
    n_states: usize,
    n_inputs: usize,
    terminated: bool,
    next: Vec<u32>,
    out: Vec<u32>,
}

impl Trellis {
    pub(crate) fn new(spec: &ConvCodeSpec) -> Self {
        let (k, n, memory) = (spec.k(), spec.n(), spec.memory());
        let n_states = spec.n_states();
        let n_inputs = 1usize << k;
        let state_mask = (n_states - 1) as u32;
        let mut next = Vec::with_capacity(n_states * n_inputs);
        let mut out = Vec::with_capacity(n_states * n_inputs);
        for s in 0..n_states as u32 {
            for a in 0..n_inputs as u32 {
                let window = (s << k) | a;
                next.push(window & state_mask);
                out.push(
                    spec.taps()
                        .iter()
                        .enumerate()
                        .fold(0u32, |acc, (j, &t)| acc | ((window & t).count_ones() & 1) << j),
                );
            }
        }
        Self {
            k,
            n,
            memory,
            n_states,
            n_inputs,
            terminated: spec.terminated(),
            next,
            out,
        }
    }

    pub(crate) fn steps(&self, info_len: usize) -> usize {
        info_len / self.k + if self.terminated { self.memory } else { 0 }
    }
}

#[derive(Default)]
pub(crate) struct Workspace {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
}

#[inline]
fn bit_probs(llr: f64) -> (f64, f64) {
    (1.0 / (1.0 + (-llr).exp()), 1.0 / (1.0 + llr.exp()))
}

fn normalize(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    if sum > 0.0 {
        let inv = 1.0 / sum;
        v.iter_mut().for_each(|x| *x *= inv);
    }
}

fn llr_from(acc0: f64, acc1: f64, clip: f64) -> f64 {
    if acc1 <= 0.0 {
        clip
    } else if acc0 <= 0.0 {
        -clip
    } else {
        (acc0 / acc1).ln().clamp(-clip, clip)
    }
}

impl Trellis {
    /// Posterior LLRs of every output bit and every (non-tail) input bit.
    pub(crate) fn run(
        &self,
        info_len: usize,
        out_llr: &[f64],
        in_llr: &[f64],
        clip: f64,
        post_out: &mut [f64],
        post_in: &mut [f64],
        ws: &mut Workspace,
    ) {
        let steps = self.steps(info_len);
        let (s_count, a_count, n, k) = (self.n_states, self.n_inputs, self.n, self.k);
        debug_assert_eq!(out_llr.len(), steps * n);
        debug_assert_eq!(in_llr.len(), info_len);
        let branches = s_count * a_count;

        ws.gamma.clear();
        ws.gamma.resize(steps * branches, 0.0);
        let mut p_out = vec![(0.0, 0.0); n];
        let mut p_in = vec![(0.0, 0.0); k];
        for t in 0..steps {
            let tail = t * k >= info_len;
            for (j, p) in p_out.iter_mut().enumerate() {
                *p = bit_probs(out_llr[t * n + j]);
            }
            if !tail {
                for (i, p) in p_in.iter_mut().enumerate() {
                    *p = bit_probs(in_llr[t * k + i]);
                }
            }
            let g = &mut ws.gamma[t * branches..(t + 1) * branches];
            for s in 0..s_count {
                for a in 0..a_count {
                    if tail && a != 0 {
                        continue;
                    }
                    let b = s * a_count + a;
                    let o = self.out[b];
                    let mut w = 1.0;
                    for (j, &(p0, p1)) in p_out.iter().enumerate() {
                        w *= if o >> j & 1 == 1 { p1 } else { p0 };
                    }
                    if !tail {
                        for (i, &(p0, p1)) in p_in.iter().enumerate() {
                            w *= if a >> i & 1 == 1 { p1 } else { p0 };
                        }
                    }
                    g[b] = w;
                }
            }
        }

        ws.alpha.clear();
        ws.alpha.resize((steps + 1) * s_count, 0.0);
        ws.alpha[0] = 1.0;
        for t in 0..steps {
            let (cur, rest) = ws.alpha[t * s_count..].split_at_mut(s_count);
            let nxt = &mut rest[..s_count];
            let g = &ws.gamma[t * branches..(t + 1) * branches];
            for s in 0..s_count {
                let a_s = cur[s];
                if a_s == 0.0 {
                    continue;
                }
                for a in 0..a_count {
                    let b = s * a_count + a;
                    nxt[self.next[b] as usize] += a_s * g[b];
                }
            }
            normalize(nxt);
        }

        ws.beta.clear();
        ws.beta.resize((steps + 1) * s_count, 0.0);
        {
            let last = &mut ws.beta[steps * s_count..];
            if self.terminated {
                last[0] = 1.0;
            } else {
                last.fill(1.0 / s_count as f64);
            }
        }
        for t in (0..steps).rev() {
            let (cur, nxt) = ws.beta[t * s_count..].split_at_mut(s_count);
            let g = &ws.gamma[t * branches..(t + 1) * branches];
            for s in 0..s_count {
                let mut acc = 0.0;
                for a in 0..a_count {
                    let b = s * a_count + a;
                    acc += g[b] * nxt[self.next[b] as usize];
                }
                cur[s] = acc;
            }
            normalize(cur);
        }

        let mut acc_out = vec![[0.0f64; 2]; n];
        let mut acc_in = vec![[0.0f64; 2]; k];
        for t in 0..steps {
            let tail = t * k >= info_len;
            acc_out.iter_mut().for_each(|x| *x = [0.0; 2]);
            acc_in.iter_mut().for_each(|x| *x = [0.0; 2]);
            let alpha = &ws.alpha[t * s_count..(t + 1) * s_count];
            let beta = &ws.beta[(t + 1) * s_count..(t + 2) * s_count];
            let g = &ws.gamma[t * branches..(t + 1) * branches];
            for s in 0..s_count {
                if alpha[s] == 0.0 {
                    continue;
                }
                for a in 0..a_count {
                    let b = s * a_count + a;
                    let w = alpha[s] * g[b] * beta[self.next[b] as usize];
                    if w == 0.0 {
                        continue;
                    }
                    let o = self.out[b];
                    for (j, acc) in acc_out.iter_mut().enumerate() {
                        acc[(o >> j & 1) as usize] += w;
                    }
                    if !tail {
                        for (i, acc) in acc_in.iter_mut().enumerate() {
                            acc[(a >> i & 1) as usize] += w;
                        }
                    }
                }
            }
            for (j, acc) in acc_out.iter().enumerate() {
                post_out[t * n + j] = llr_from(acc[0], acc[1], clip);
            }
            if !tail {
                for (i, acc) in acc_in.iter().enumerate() {
                    post_in[t * k + i] = llr_from(acc[0], acc[1], clip);
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SisoMode<'a> {
    /// Marginals over codewords of the component code.
    Codeword,
    /// Marginals over error sequences whose component syndrome is the given
    /// vector; inputs are the left-inverse images of those sequences.
    Syndrome(&'a [u8]),
}

/// Per-bit soft output. Probabilities are of the bit being 1 (a flip, in
/// syndrome mode).
#[derive(Clone, Debug, PartialEq)]
pub struct SisoResult {
    pub posterior_flip_probabilities: Vec<f64>,
    pub extrinsic: Vec<f64>,
    pub hard_estimate: Vec<u8>,
    pub input_posterior: Vec<f64>,
    pub input_extrinsic: Vec<f64>,
    /// Some evidence or prior was exactly 0 or 1 (or outside the floor band)
    /// and was clamped.
    pub clamped: bool,
}

fn to_llr(p: f64, clamped: &mut bool) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("evidence", format!("{p} is not a probability")));
    }
    let q = p.clamp(EVIDENCE_FLOOR, 1.0 - EVIDENCE_FLOOR);
    if q != p {
        *clamped = true;
    }
    Ok(((1.0 - q) / q).ln())
}

fn flip_prob(llr: f64) -> f64 {
    1.0 / (1.0 + llr.exp())
}

/// Exact MAP soft-in soft-out pass over one component code.
///
/// `channel_evidence` gives, per codeword position, the probability that the
/// bit is 1; `prior` gives the same for each input bit (tail bits are fixed
/// to zero and not listed). The input length is `prior.len()`.
pub fn bcjr_siso(
    spec: &ConvCodeSpec,
    channel_evidence: &[f64],
    prior: &[f64],
    mode: SisoMode<'_>,
) -> Result<SisoResult> {
    let info_len = prior.len();
    if info_len % spec.k() != 0 {
        return Err(Error::param("prior", "length is not a multiple of k"));
    }
    check_len(spec.encoded_len(info_len), channel_evidence.len())?;
    let mut clamped = false;
    let mut out_llr = channel_evidence
        .iter()
        .map(|&p| to_llr(p, &mut clamped))
        .collect::<Result<Vec<_>>>()?;
    let in_llr = prior
        .iter()
        .map(|&p| to_llr(p, &mut clamped))
        .collect::<Result<Vec<_>>>()?;

    let rep = match mode {
        SisoMode::Codeword => None,
        SisoMode::Syndrome(z) => {
            let sf = ComponentSyndromeFormer::new(spec, info_len)?;
            let rep = sf.coset_representative(z)?;
            for (l, &r) in out_llr.iter_mut().zip(&rep) {
                if r == 1 {
                    *l = -*l;
                }
            }
            Some(rep)
        }
    };

    let trellis = Trellis::new(spec);
    let mut post_out = vec![0.0; out_llr.len()];
    let mut post_in = vec![0.0; info_len];
    let mut ws = Workspace::default();
    trellis.run(info_len, &out_llr, &in_llr, 700.0, &mut post_out, &mut post_in, &mut ws);

    let mut ext_out: Vec<f64> = post_out.iter().zip(&out_llr).map(|(p, e)| p - e).collect();
    if let Some(rep) = &rep {
        for ((p, x), &r) in post_out.iter_mut().zip(ext_out.iter_mut()).zip(rep) {
            if r == 1 {
                *p = -*p;
                *x = -*x;
            }
        }
    }
    Ok(SisoResult {
        posterior_flip_probabilities: post_out.iter().map(|&l| flip_prob(l)).collect(),
        extrinsic: ext_out.iter().map(|&l| flip_prob(l)).collect(),
        hard_estimate: post_out.iter().map(|&l| (l < 0.0) as u8).collect(),
        input_posterior: post_in.iter().map(|&l| flip_prob(l)).collect(),
        input_extrinsic: post_in.iter().zip(&in_llr).map(|(p, e)| flip_prob(p - e)).collect(),
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> ConvCodeSpec {
        ConvCodeSpec::new(1, 2, 1, vec![0b11, 0b10], true).unwrap()
    }

    #[test]
    fn uniform_evidence_gives_uniform_posteriors() {
        let spec = ConvCodeSpec::from_octal(3, &["13", "15", "17"], true).unwrap();
        let len = spec.encoded_len(4);
        let z = vec![0u8; len - 4];
        let r = bcjr_siso(&spec, &vec![0.5; len], &[0.5; 4], SisoMode::Syndrome(&z)).unwrap();
        for &p in &r.posterior_flip_probabilities {
            assert!((p - 0.5).abs() < 1e-12, "{p}");
        }
        assert!(!r.clamped);
    }

    #[test]
    fn confident_zero_evidence_decodes_to_zero() {
        let spec = ConvCodeSpec::from_octal(3, &["13", "15", "17"], true).unwrap();
        let len = spec.encoded_len(10);
        let z = vec![0u8; len - 10];
        let r = bcjr_siso(&spec, &vec![1e-12; len], &[0.5; 10], SisoMode::Syndrome(&z)).unwrap();
        assert!(r.hard_estimate.iter().all(|&b| b == 0));
    }

    #[test]
    fn degenerate_evidence_is_clamped_and_flagged() {
        let spec = toy();
        let len = spec.encoded_len(3);
        let mut ev = vec![0.1; len];
        ev[0] = 0.0;
        ev[1] = 1.0;
        let r = bcjr_siso(&spec, &ev, &[0.5; 3], SisoMode::Codeword).unwrap();
        assert!(r.clamped);
        assert!(r.posterior_flip_probabilities.iter().all(|p| (0.0..=1.0).contains(p)));
    }

    #[test]
    fn rejects_bad_lengths_and_values() {
        let spec = toy();
        assert!(bcjr_siso(&spec, &[0.1; 5], &[0.5; 3], SisoMode::Codeword).is_err());
        let len = spec.encoded_len(3);
        let mut ev = vec![0.1; len];
        ev[2] = 1.5;
        assert!(bcjr_siso(&spec, &ev, &[0.5; 3], SisoMode::Codeword).is_err());
        assert!(bcjr_siso(&spec, &vec![0.1; len], &[0.5; 3], SisoMode::Syndrome(&[0; 2])).is_err());
    }
}
