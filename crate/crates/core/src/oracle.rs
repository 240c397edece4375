//! Exhaustive references for small codes.
//!
//! Everything here enumerates all words of a block of at most 20 positions.
//! The routines deliberately avoid the trellis and message-passing code so
//! they can check it.

use crate::error::{Error, Result};
use crate::gf2::{weight, DenseGf2};
use crate::turbo::ConvCodeSpec;

pub const MAX_ORACLE_LEN: usize = 20;

fn bits_of(word: u32, len: usize) -> Vec<u8> {
    (0..len).map(|i| (word >> i & 1) as u8).collect()
}

fn check_small(len: usize) -> Result<()> {
    if len > MAX_ORACLE_LEN {
        return Err(Error::Unsupported(format!(
            "exhaustive enumeration over {len} positions exceeds {MAX_ORACLE_LEN}"
        )));
    }
    Ok(())
}

/// Minimum-weight solution of `syndrome(e) = z` over all `2^n` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlSolution {
    pub estimate: Vec<u8>,
    /// No other word of the same weight has the syndrome.
    pub unique: bool,
}

/// Maximum-likelihood syndrome decoding under an i.i.d. flip prior below
/// 1/2, which is minimum-weight decoding. `None` when no word matches.
pub fn exhaustive_ml<F>(n: usize, z: &[u8], syndrome: F) -> Result<Option<MlSolution>>
where
    F: Fn(&[u8]) -> Result<Vec<u8>>,
{
    check_small(n)?;
    let mut best: Option<(usize, Vec<u8>, bool)> = None;
    for word in 0..1u32 << n {
        let e = bits_of(word, n);
        let w = weight(&e);
        if best.as_ref().is_some_and(|(bw, _, _)| w > *bw) {
            continue;
        }
        if syndrome(&e)? != z {
            continue;
        }
        best = match best {
            Some((bw, be, _)) if bw == w => Some((bw, be, false)),
            _ => Some((w, e, true)),
        };
    }
    Ok(best.map(|(_, estimate, unique)| MlSolution { estimate, unique }))
}

/// Exact per-bit marginals of a component code by enumerating inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct Marginals {
    /// Probability that each output position is 1.
    pub outputs: Vec<f64>,
    /// Probability that each input bit is 1.
    pub inputs: Vec<f64>,
}

/// Marginals over codewords `encode(u)` with output evidence and input
/// priors given as flip probabilities.
pub fn codeword_marginals(spec: &ConvCodeSpec, evidence: &[f64], prior: &[f64]) -> Result<Marginals> {
    let k = prior.len();
    check_small(k)?;
    let n = spec.encoded_len(k);
    crate::error::check_len(n, evidence.len())?;
    let mut outputs = vec![0.0; n];
    let mut inputs = vec![0.0; k];
    let mut total = 0.0;
    for word in 0..1u32 << k {
        let u = bits_of(word, k);
        let c = spec.encode(&u)?;
        let mut w = 1.0;
        for (&b, &p) in c.iter().zip(evidence) {
            w *= if b == 1 { p } else { 1.0 - p };
        }
        for (&b, &p) in u.iter().zip(prior) {
            w *= if b == 1 { p } else { 1.0 - p };
        }
        total += w;
        for (acc, &b) in outputs.iter_mut().zip(&c) {
            if b == 1 {
                *acc += w;
            }
        }
        for (acc, &b) in inputs.iter_mut().zip(&u) {
            if b == 1 {
                *acc += w;
            }
        }
    }
    outputs.iter_mut().chain(inputs.iter_mut()).for_each(|x| *x /= total);
    Ok(Marginals { outputs, inputs })
}

/// Output marginals over the coset `planted + code` of a component code,
/// with evidence given as flip probabilities.
pub fn coset_marginals(spec: &ConvCodeSpec, info_len: usize, planted: &[u8], evidence: &[f64]) -> Result<Vec<f64>> {
    check_small(info_len)?;
    let n = spec.encoded_len(info_len);
    crate::error::check_len(n, planted.len())?;
    crate::error::check_len(n, evidence.len())?;
    let mut out = vec![0.0; n];
    let mut total = 0.0;
    for word in 0..1u32 << info_len {
        let c = spec.encode(&bits_of(word, info_len))?;
        let e: Vec<u8> = c.iter().zip(planted).map(|(a, b)| a ^ b).collect();
        let mut w = 1.0;
        for (&b, &p) in e.iter().zip(evidence) {
            w *= if b == 1 { p } else { 1.0 - p };
        }
        total += w;
        for (acc, &b) in out.iter_mut().zip(&e) {
            if b == 1 {
                *acc += w;
            }
        }
    }
    out.iter_mut().for_each(|x| *x /= total);
    Ok(out)
}

/// All words orthogonal to every codeword, found by enumeration. Returns the
/// dual as the list of its words.
pub fn dual_space(n: usize, codewords: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    check_small(n)?;
    let packed: Vec<u32> = codewords
        .iter()
        .map(|c| c.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (b as u32) << i))
        .collect();
    Ok((0..1u32 << n)
        .filter(|&h| packed.iter().all(|&c| (h & c).count_ones() % 2 == 0))
        .map(|h| bits_of(h, n))
        .collect())
}

/// True when the rows of `h` span exactly the dual of the given codewords.
pub fn spans_dual(h: &DenseGf2, codewords: &[Vec<u8>]) -> Result<bool> {
    let n = h.n_cols();
    let dual = dual_space(n, codewords)?;
    let dual_dim = dual.len().trailing_zeros() as usize;
    let rows_in_dual = (0..h.n_rows()).all(|r| {
        let row = h.row_bits(r);
        codewords
            .iter()
            .all(|c| row.iter().zip(c).filter(|(a, b)| **a & **b == 1).count() % 2 == 0)
    });
    Ok(rows_in_dual && h.rank() == dual_dim)
}
