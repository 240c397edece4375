//! Serial concatenation: outer code, interleaver, inner code.
//!
//! Syndrome layout. For an error pattern `e` of the serial block length the
//! syndrome is the inner component syndrome of `e` followed by the outer
//! component syndrome of `deinterleave(L_inner(e))`, where `L_inner` is the
//! inner left inverse. Both parts vanish exactly on serial codewords, and the
//! total length `N - K` makes the induced parity-check matrix full rank.
//! A coset representative for `[z_inner ; z_outer]` is
//! `encode_inner(interleave(T_outer(z_outer))) + T_inner(z_inner)` with `T`
//! the component coset representatives.

use super::conv::{ComponentSyndromeFormer, ConvCodeSpec};
use super::interleaver::Interleaver;
use super::siso::{Trellis, Workspace};
use crate::error::{check_len, Error, Result};
use crate::gf2::{hamming_distance, xor_in_place};
use crate::ldpc::ParityCheckMatrix;

pub const DEFAULT_ITERATIONS: usize = 10;
const LLR_CLIP: f64 = 50.0;

#[derive(Clone, Debug)]
pub struct SerialTurboSpec {
    outer: ConvCodeSpec,
    inner: ConvCodeSpec,
    interleaver: Interleaver,
    block_len: usize,
}

impl SerialTurboSpec {
    pub fn new(
        outer: ConvCodeSpec,
        inner: ConvCodeSpec,
        interleaver: Interleaver,
        block_len: usize,
    ) -> Result<Self> {
        if block_len == 0 || block_len % outer.k() != 0 {
            return Err(Error::param("block_len", "must be a positive multiple of the outer k"));
        }
        let mid = outer.encoded_len(block_len);
        if interleaver.len() != mid {
            return Err(Error::param(
                "interleaver",
                format!("length {} differs from outer output length {mid}", interleaver.len()),
            ));
        }
        if mid % inner.k() != 0 {
            return Err(Error::param("inner", "outer output length is not a multiple of the inner k"));
        }
        Ok(Self {
            outer,
            inner,
            interleaver,
            block_len,
        })
    }

    pub fn outer(&self) -> &ConvCodeSpec {
        &self.outer
    }

    pub fn inner(&self) -> &ConvCodeSpec {
        &self.inner
    }

    pub fn interleaver(&self) -> &Interleaver {
        &self.interleaver
    }

    /// Number of information bits per block.
    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn interleaver_len(&self) -> usize {
        self.interleaver.len()
    }

    pub fn code_len(&self) -> usize {
        self.inner.encoded_len(self.interleaver_len())
    }

    /// Exact rate including termination tails.
    pub fn rate(&self) -> f64 {
        self.block_len as f64 / self.code_len() as f64
    }

    /// Rate without tails, the product of the component rates.
    pub fn nominal_rate(&self) -> f64 {
        self.outer.rate() * self.inner.rate()
    }

    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        check_len(self.block_len, u.len())?;
        let mid = self.interleaver.interleave(&self.outer.encode(u)?)?;
        self.inner.encode(&mid)
    }
}

pub fn serial_encode(spec: &SerialTurboSpec, u: &[u8]) -> Result<Vec<u8>> {
    spec.encode(u)
}

/// Options for iterative decoding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurboOptions {
    pub iterations: usize,
    /// Stop once the estimate reproduces the syndrome; the trace is then
    /// filled forward with the final estimate.
    pub early_stop: bool,
    pub record_history: bool,
}

impl Default for TurboOptions {
    fn default() -> Self {
        Self {
            iterations: DEFAULT_ITERATIONS,
            early_stop: false,
            record_history: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TurboTrace {
    pub iterations_run: usize,
    /// The final estimate reproduces the syndrome.
    pub converged: bool,
    /// Per-iteration count of syndrome bits the estimate fails to reproduce.
    pub unsatisfied: Vec<usize>,
    /// Estimate after each iteration (when recorded).
    pub history: Vec<Vec<u8>>,
}

impl TurboTrace {
    /// Residual error rate of each recorded estimate against the true error.
    pub fn qber_against(&self, truth: &[u8]) -> Vec<f64> {
        self.history
            .iter()
            .map(|e| hamming_distance(e, truth) as f64 / truth.len().max(1) as f64)
            .collect()
    }
}

/// A serial turbo code with its syndrome formers and trellises built once.
#[derive(Clone, Debug)]
pub struct TurboCodec {
    spec: SerialTurboSpec,
    outer_sf: ComponentSyndromeFormer,
    inner_sf: ComponentSyndromeFormer,
    outer_trellis: Trellis,
    inner_trellis: Trellis,
}

impl TurboCodec {
    pub fn new(spec: SerialTurboSpec) -> Result<Self> {
        let outer_sf = ComponentSyndromeFormer::new(&spec.outer, spec.block_len)?;
        let inner_sf = ComponentSyndromeFormer::new(&spec.inner, spec.interleaver_len())?;
        Ok(Self {
            outer_trellis: Trellis::new(&spec.outer),
            inner_trellis: Trellis::new(&spec.inner),
            outer_sf,
            inner_sf,
            spec,
        })
    }

    pub fn spec(&self) -> &SerialTurboSpec {
        &self.spec
    }

    pub fn code_len(&self) -> usize {
        self.spec.code_len()
    }

    pub fn syndrome_len(&self) -> usize {
        self.inner_sf.syndrome_len() + self.outer_sf.syndrome_len()
    }

    pub fn syndrome(&self, e: &[u8]) -> Result<Vec<u8>> {
        check_len(self.code_len(), e.len())?;
        let mut z = self.inner_sf.syndrome(e)?;
        let w = self.inner_sf.left_inverse(e)?;
        let c = self.spec.interleaver.deinterleave(&w)?;
        z.extend(self.outer_sf.syndrome(&c)?);
        Ok(z)
    }

    /// An error pattern with syndrome `z`.
    pub fn coset_representative(&self, z: &[u8]) -> Result<Vec<u8>> {
        check_len(self.syndrome_len(), z.len())?;
        let (z_inner, z_outer) = z.split_at(self.inner_sf.syndrome_len());
        let t_outer = self.outer_sf.coset_representative(z_outer)?;
        let mut e = self.spec.inner.encode(&self.spec.interleaver.interleave(&t_outer)?)?;
        xor_in_place(&mut e, &self.inner_sf.coset_representative(z_inner)?);
        Ok(e)
    }

    /// Sparse parity-check matrix whose product with any error pattern equals
    /// [`TurboCodec::syndrome`]. Built column by column from unit vectors.
    pub fn parity_check_matrix(&self) -> Result<ParityCheckMatrix> {
        let n = self.code_len();
        let mut cols = Vec::with_capacity(n);
        let mut unit = vec![0u8; n];
        for i in 0..n {
            unit[i] = 1;
            let z = self.syndrome(&unit)?;
            unit[i] = 0;
            cols.push(z.iter().enumerate().filter(|(_, &b)| b == 1).map(|(r, _)| r).collect());
        }
        ParityCheckMatrix::from_columns(self.syndrome_len(), &cols)
    }

    /// Iterative syndrome decoding of the error pattern.
    ///
    /// `prior` is the per-position flip probability. Decoding runs on the
    /// serial codeword `e + coset_representative(z)` with the channel
    /// evidence sign-flipped where the representative is 1.
    pub fn decode(&self, z: &[u8], prior: &[f64], opts: &TurboOptions) -> Result<(Vec<u8>, TurboTrace)> {
        let n = self.code_len();
        check_len(n, prior.len())?;
        if opts.iterations == 0 {
            return Err(Error::param("iterations", "must be at least 1"));
        }
        let rep = self.coset_representative(z)?;
        let channel: Vec<f64> = prior
            .iter()
            .zip(&rep)
            .map(|(&q, &r)| {
                let q = q.clamp(super::siso::EVIDENCE_FLOOR, 1.0 - super::siso::EVIDENCE_FLOOR);
                let l = ((1.0 - q) / q).ln().clamp(-LLR_CLIP, LLR_CLIP);
                if r == 1 { -l } else { l }
            })
            .collect();

        let mid = self.spec.interleaver_len();
        let k = self.spec.block_len;
        let mut ws = Workspace::default();
        let mut prior_w = vec![0.0; mid];
        let mut post_c = vec![0.0; n];
        let mut post_w = vec![0.0; mid];
        let mut ext_outer_in = vec![0.0; mid];
        let mut post_outer = vec![0.0; mid];
        let mut post_u = vec![0.0; k];
        let uniform_u = vec![0.0; k];
        let mut ext_outer = vec![0.0; mid];

        self.inner_trellis
            .run(mid, &channel, &prior_w, LLR_CLIP, &mut post_c, &mut post_w, &mut ws);

        let mut trace = TurboTrace::default();
        let mut estimate = vec![0u8; n];
        for it in 0..opts.iterations {
            for i in 0..mid {
                ext_outer[i] = post_w[i] - prior_w[i];
            }
            self.spec.interleaver.deinterleave_into(&ext_outer, &mut ext_outer_in);
            self.outer_trellis.run(
                k,
                &ext_outer_in,
                &uniform_u,
                LLR_CLIP,
                &mut post_outer,
                &mut post_u,
                &mut ws,
            );
            for i in 0..mid {
                post_outer[i] = (post_outer[i] - ext_outer_in[i]).clamp(-LLR_CLIP, LLR_CLIP);
            }
            self.spec.interleaver.interleave_into(&post_outer, &mut prior_w);
            self.inner_trellis
                .run(mid, &channel, &prior_w, LLR_CLIP, &mut post_c, &mut post_w, &mut ws);

            for ((e, &l), &r) in estimate.iter_mut().zip(&post_c).zip(&rep) {
                *e = (l < 0.0) as u8 ^ r;
            }
            let unsat = hamming_distance(&self.syndrome(&estimate)?, z);
            trace.iterations_run = it + 1;
            trace.unsatisfied.push(unsat);
            if opts.record_history {
                trace.history.push(estimate.clone());
            }
            if unsat == 0 && opts.early_stop {
                break;
            }
        }
        trace.converged = trace.unsatisfied.last() == Some(&0);
        if opts.early_stop {
            while trace.unsatisfied.len() < opts.iterations {
                trace.unsatisfied.push(0);
                if opts.record_history {
                    trace.history.push(estimate.clone());
                }
            }
        }
        Ok((estimate, trace))
    }
}

/// Parity-check matrix of the serial code (see [`TurboCodec::parity_check_matrix`]).
pub fn parity_check_of(spec: &SerialTurboSpec) -> Result<ParityCheckMatrix> {
    TurboCodec::new(spec.clone())?.parity_check_matrix()
}

/// One-shot decode with a uniform prior; the trace records every iteration.
pub fn turbo_syndrome_decode(
    spec: &SerialTurboSpec,
    z: &[u8],
    prior_flip: f64,
    iterations: usize,
) -> Result<(Vec<u8>, TurboTrace)> {
    let prior_flip = crate::error::check_probability("prior_flip", prior_flip)?;
    let codec = TurboCodec::new(spec.clone())?;
    let opts = TurboOptions {
        iterations,
        early_stop: false,
        record_history: true,
    };
    codec.decode(z, &vec![prior_flip; codec.code_len()], &opts)
}
