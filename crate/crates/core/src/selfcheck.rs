//! Fast oracle checks run by the `validate` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bb84::run_exchange;
use crate::channels::{analytic_sifted_qber, ChannelStack, DepolarizingParams, InterceptResendParams};
use crate::error::Result;
use crate::ldpc::{bp_syndrome_decode, build_regular, read_alist, write_alist, ParityCheckMatrix};
use crate::metrics::secret_info_bound;
use crate::oracle::{codeword_marginals, coset_marginals, exhaustive_ml, spans_dual};
use crate::turbo::{
    bcjr_siso, ComponentSyndromeFormer, ConvCodeSpec, Interleaver, InterleaverKind, SerialTurboSpec,
    SisoMode, TurboCodec, TurboOptions,
};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Memory-1 rate-1/2 component with taps `1 + D` and `D`.
pub fn toy_outer() -> ConvCodeSpec {
    ConvCodeSpec::new(1, 2, 1, vec![0b11, 0b10], true).expect("valid toy code")
}

/// Memory-1 rate-1 component with tap `1 + D`.
pub fn toy_inner() -> ConvCodeSpec {
    ConvCodeSpec::new(1, 1, 1, vec![0b11], true).expect("valid toy code")
}

/// Serial code of the two toy components: 4 input bits, 11 code bits.
pub fn toy_serial(seed: u64) -> Result<SerialTurboSpec> {
    let outer = toy_outer();
    let il = Interleaver::from_seed(InterleaverKind::UniformRandom, outer.encoded_len(4), seed)?;
    SerialTurboSpec::new(outer, toy_inner(), il, 4)
}

/// Regular (2, 4) code on 12 bits.
pub fn toy_ldpc(seed: u64) -> Result<ParityCheckMatrix> {
    build_regular(12, 2, 4, 6, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn random_probs(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(0.02..0.98)).collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Largest deviation of BCJR posteriors from enumeration over random
/// evidence, in codeword and syndrome mode.
pub fn bcjr_max_deviation(spec: &ConvCodeSpec, info_len: usize, cases: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.encoded_len(info_len);
    let sf = ComponentSyndromeFormer::new(spec, info_len)?;
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let ev = random_probs(&mut rng, n);
        let prior = random_probs(&mut rng, info_len);
        let got = bcjr_siso(spec, &ev, &prior, SisoMode::Codeword)?;
        let want = codeword_marginals(spec, &ev, &prior)?;
        worst = worst
            .max(max_abs_diff(&got.posterior_flip_probabilities, &want.outputs))
            .max(max_abs_diff(&got.input_posterior, &want.inputs));

        let planted: Vec<u8> = (0..n).map(|_| rng.random_bool(0.3) as u8).collect();
        let z = sf.syndrome(&planted)?;
        let got = bcjr_siso(spec, &ev, &vec![0.5; info_len], SisoMode::Syndrome(&z))?;
        let want = coset_marginals(spec, info_len, &planted, &ev)?;
        worst = worst.max(max_abs_diff(&got.posterior_flip_probabilities, &want));
    }
    Ok(worst)
}

/// Outcome of comparing a decoder with exhaustive ML on every weight-1
/// error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MlAgreement {
    /// Weight-1 errors whose ML solution is unique.
    pub unique_cases: usize,
    pub matches: usize,
}

pub fn turbo_ml_agreement(spec: &SerialTurboSpec, prior: f64, iterations: usize) -> Result<MlAgreement> {
    let codec = TurboCodec::new(spec.clone())?;
    let n = codec.code_len();
    let opts = TurboOptions {
        iterations,
        ..TurboOptions::default()
    };
    let mut out = MlAgreement {
        unique_cases: 0,
        matches: 0,
    };
    for i in 0..n {
        let mut e = vec![0u8; n];
        e[i] = 1;
        let z = codec.syndrome(&e)?;
        let Some(ml) = exhaustive_ml(n, &z, |x| codec.syndrome(x))? else {
            continue;
        };
        if !ml.unique {
            continue;
        }
        out.unique_cases += 1;
        let (est, _) = codec.decode(&z, &vec![prior; n], &opts)?;
        out.matches += (est == ml.estimate) as usize;
    }
    Ok(out)
}

pub fn bp_ml_agreement(h: &ParityCheckMatrix, prior: f64, max_iter: usize) -> Result<MlAgreement> {
    let n = h.n();
    let mut out = MlAgreement {
        unique_cases: 0,
        matches: 0,
    };
    for i in 0..n {
        let mut e = vec![0u8; n];
        e[i] = 1;
        let z = h.syndrome(&e)?;
        let Some(ml) = exhaustive_ml(n, &z, |x| h.syndrome(x))? else {
            continue;
        };
        if !ml.unique {
            continue;
        }
        out.unique_cases += 1;
        let (est, _) = bp_syndrome_decode(h, &z, prior, max_iter)?;
        out.matches += (est == ml.estimate) as usize;
    }
    Ok(out)
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    match f() {
        Ok((passed, detail)) => CheckResult { name, passed, detail },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Runs every check. Takes a few seconds in an optimized build.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check("bcjr matches enumeration", || {
            let d = bcjr_max_deviation(&toy_outer(), 4, 50, 1)?;
            let d3 = bcjr_max_deviation(&ConvCodeSpec::from_octal(3, &["13", "15", "17"], true)?, 4, 20, 2)?;
            let worst = d.max(d3);
            Ok((worst <= 1e-9, format!("max abs deviation {worst:.2e}")))
        }),
        check("turbo matches ML on weight-1 errors", || {
            let a = turbo_ml_agreement(&toy_serial(3)?, 0.05, 10)?;
            Ok((
                a.unique_cases > 0 && a.matches == a.unique_cases,
                format!("{}/{} unique cases", a.matches, a.unique_cases),
            ))
        }),
        check("bp matches ML on weight-1 errors", || {
            let a = bp_ml_agreement(&toy_ldpc(5)?, 0.05, 50)?;
            Ok((
                a.unique_cases > 0 && a.matches == a.unique_cases,
                format!("{}/{} unique cases", a.matches, a.unique_cases),
            ))
        }),
        check("serial parity checks span the dual", || {
            let spec = toy_serial(4)?;
            let h = TurboCodec::new(spec.clone())?.parity_check_matrix()?.to_dense();
            let basis: Vec<Vec<u8>> = (0..spec.block_len())
                .map(|i| {
                    let mut u = vec![0u8; spec.block_len()];
                    u[i] = 1;
                    spec.encode(&u)
                })
                .collect::<Result<_>>()?;
            let ok = spans_dual(&h, &basis)?;
            Ok((ok, format!("rank {} for n = {}", h.rank(), h.n_cols())))
        }),
        check("secret bound reference values", || {
            let v = secret_info_bound(0.11)?;
            let ok = secret_info_bound(0.0)? == 1.0
                && secret_info_bound(0.5)? == 0.0
                && secret_info_bound(1.0)? == 1.0
                && (v - 0.500_084_041_8).abs() < 1e-10;
            Ok((ok, format!("bound(0.11) = {v:.10}")))
        }),
        check("sifted qber matches analytic value", || {
            let (p, s) = (0.06, 0.2);
            let stack = ChannelStack::eve_then_channel(p, s)?;
            let pair = run_exchange(40_000, &stack, &mut ChaCha8Rng::seed_from_u64(6))?;
            let q = analytic_sifted_qber(DepolarizingParams::new(p)?, InterceptResendParams::new(s)?);
            let sigma = (q * (1.0 - q) / pair.len() as f64).sqrt();
            let got = pair.qber();
            Ok(((got - q).abs() < 4.0 * sigma, format!("measured {got:.4}, analytic {q:.4}")))
        }),
        check("interleaver round trip", || {
            let mut rng = ChaCha8Rng::seed_from_u64(8);
            let mut ok = true;
            for kind in [InterleaverKind::UniformRandom, InterleaverKind::Structured] {
                let il = Interleaver::from_seed(kind, 1000, 9)?;
                let x: Vec<u8> = (0..1000).map(|_| rng.random_range(0..2)).collect();
                ok &= il.deinterleave(&il.interleave(&x)?)? == x;
            }
            Ok((ok, "random and structured".into()))
        }),
        check("alist round trip", || {
            let h = build_regular(96, 3, 6, 6, &mut ChaCha8Rng::seed_from_u64(10))?;
            let back = read_alist(&write_alist(&h))?;
            Ok((back == h, format!("{} x {}", h.m(), h.n())))
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
