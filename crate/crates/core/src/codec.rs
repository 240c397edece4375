//! A uniform handle over the two syndrome codecs, and the named presets.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ldpc::{build_regular, BpDecoder, BpOptions, ParityCheckMatrix};
use crate::turbo::{ConvCodeSpec, Interleaver, InterleaverKind, SerialTurboSpec, TurboCodec, TurboOptions};

pub const LDPC_DEFAULT_ITERATIONS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodecFamily {
    Ldpc,
    Turbo,
}

impl fmt::Display for CodecFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodecFamily::Ldpc => "ldpc",
            CodecFamily::Turbo => "turbo",
        })
    }
}

#[derive(Clone, Debug)]
enum Inner {
    Ldpc(ParityCheckMatrix),
    Turbo(TurboCodec),
}

/// A syndrome code ready for reconciliation. Immutable and shareable across
/// threads.
#[derive(Clone, Debug)]
pub struct Codec {
    name: String,
    inner: Inner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct DecodeOptions {
    /// Iteration cap; `None` picks the family default (50 for BP, 10 for turbo).
    pub iterations: Option<usize>,
    pub early_stop: bool,
    pub record_history: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub estimate: Vec<u8>,
    /// The estimate reproduces the syndrome.
    pub claimed_success: bool,
    pub iterations_used: usize,
    /// Estimate after each iteration, one entry per allowed iteration.
    pub history: Vec<Vec<u8>>,
    /// Whether each recorded estimate reproduces the syndrome.
    pub claimed_history: Vec<bool>,
}

impl Codec {
    pub fn from_ldpc(name: impl Into<String>, h: ParityCheckMatrix) -> Self {
        Self {
            name: name.into(),
            inner: Inner::Ldpc(h),
        }
    }

    pub fn from_turbo(name: impl Into<String>, codec: TurboCodec) -> Self {
        Self {
            name: name.into(),
            inner: Inner::Turbo(codec),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> CodecFamily {
        match self.inner {
            Inner::Ldpc(_) => CodecFamily::Ldpc,
            Inner::Turbo(_) => CodecFamily::Turbo,
        }
    }

    pub fn as_ldpc(&self) -> Option<&ParityCheckMatrix> {
        match &self.inner {
            Inner::Ldpc(h) => Some(h),
            Inner::Turbo(_) => None,
        }
    }

    pub fn as_turbo(&self) -> Option<&TurboCodec> {
        match &self.inner {
            Inner::Turbo(t) => Some(t),
            Inner::Ldpc(_) => None,
        }
    }

    pub fn block_len(&self) -> usize {
        match &self.inner {
            Inner::Ldpc(h) => h.n(),
            Inner::Turbo(t) => t.code_len(),
        }
    }

    /// Bits published per block.
    pub fn syndrome_len(&self) -> usize {
        match &self.inner {
            Inner::Ldpc(h) => h.m(),
            Inner::Turbo(t) => t.syndrome_len(),
        }
    }

    /// `1 - syndrome_len / block_len`.
    pub fn rate(&self) -> f64 {
        1.0 - self.syndrome_len() as f64 / self.block_len() as f64
    }

    pub fn default_iterations(&self) -> usize {
        match self.inner {
            Inner::Ldpc(_) => LDPC_DEFAULT_ITERATIONS,
            Inner::Turbo(_) => crate::turbo::DEFAULT_ITERATIONS,
        }
    }

    pub fn syndrome(&self, x: &[u8]) -> Result<Vec<u8>> {
        match &self.inner {
            Inner::Ldpc(h) => h.syndrome(x),
            Inner::Turbo(t) => t.syndrome(x),
        }
    }

    pub fn decode(&self, zeta: &[u8], prior_flip: f64, opts: &DecodeOptions) -> Result<DecodeOutcome> {
        let iterations = opts.iterations.unwrap_or(self.default_iterations());
        match &self.inner {
            Inner::Ldpc(h) => {
                let bp = BpOptions {
                    max_iter: iterations,
                    early_stop: opts.early_stop,
                    record_history: opts.record_history,
                    ..BpOptions::default()
                };
                let out = BpDecoder::new(h, bp).decode(zeta, prior_flip)?;
                Ok(DecodeOutcome {
                    estimate: out.error_estimate,
                    claimed_success: out.trace.converged,
                    iterations_used: out.trace.iterations_used,
                    history: out.history,
                    claimed_history: out.unsatisfied_history.iter().map(|&u| u == 0).collect(),
                })
            }
            Inner::Turbo(t) => {
                if !(prior_flip > 0.0 && prior_flip < 0.5) {
                    return Err(Error::param("prior_flip", format!("{prior_flip} is not in (0, 1/2)")));
                }
                let to = TurboOptions {
                    iterations,
                    early_stop: opts.early_stop,
                    record_history: opts.record_history,
                };
                let (estimate, trace) = t.decode(zeta, &vec![prior_flip; t.code_len()], &to)?;
                Ok(DecodeOutcome {
                    estimate,
                    claimed_success: trace.converged,
                    iterations_used: trace.iterations_run,
                    claimed_history: if opts.record_history {
                        trace.unsatisfied.iter().map(|&u| u == 0).collect()
                    } else {
                        Vec::new()
                    },
                    history: trace.history,
                })
            }
        }
    }
}

/// Static description of a named preset.
#[derive(Clone, Debug, PartialEq)]
pub struct PresetInfo {
    pub name: &'static str,
    pub family: CodecFamily,
    /// Block length `n`.
    pub n: usize,
    /// Information length of the code (`n - m` for LDPC, input block for turbo).
    pub k: usize,
    pub rate: &'static str,
    pub structure: &'static str,
}

pub const PRESETS: [PresetInfo; 4] = [
    PresetInfo {
        name: "ldpc1",
        family: CodecFamily::Ldpc,
        n: 3600,
        k: 1800,
        rate: "1/2",
        structure: "regular (dv, dc) = (6, 12), girth target 6",
    },
    PresetInfo {
        name: "ldpc2",
        family: CodecFamily::Ldpc,
        n: 8736,
        k: 4368,
        rate: "1/2",
        structure: "regular (dv, dc) = (4, 8), girth target 6",
    },
    PresetInfo {
        name: "turbo1",
        family: CodecFamily::Turbo,
        n: 3600,
        k: 396,
        rate: "1/9",
        structure: "outer and inner (n, k, m) = (3, 1, 3), octal 13 15 17, terminated",
    },
    PresetInfo {
        name: "turbo2",
        family: CodecFamily::Turbo,
        n: 8736,
        k: 2178,
        rate: "1/4",
        structure: "outer and inner (n, k, m) = (2, 1, 4), octal 23 35, terminated",
    },
];

pub fn preset_table() -> &'static [PresetInfo] {
    &PRESETS
}

pub fn preset_info(name: &str) -> Result<&'static PresetInfo> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

fn turbo_components(name: &str) -> Result<(usize, Vec<&'static str>)> {
    match name {
        "turbo1" => Ok((3, vec!["13", "15", "17"])),
        "turbo2" => Ok((4, vec!["23", "35"])),
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

/// Serial turbo code of a preset's component family at an arbitrary input
/// block length.
pub fn turbo_with_block_len(
    name: &str,
    block_len: usize,
    interleaver: InterleaverKind,
    seed: u64,
) -> Result<SerialTurboSpec> {
    let (memory, gens) = turbo_components(name)?;
    let component = ConvCodeSpec::from_octal(memory, &gens, true)?;
    let il = Interleaver::from_seed(interleaver, component.encoded_len(block_len), seed)?;
    SerialTurboSpec::new(component.clone(), component, il, block_len)
}

/// Builds a preset. `seed` drives the LDPC construction and the random
/// interleaver; the structured interleaver ignores it.
pub fn preset(name: &str, interleaver: InterleaverKind, seed: u64) -> Result<Codec> {
    let info = preset_info(name)?;
    match info.family {
        CodecFamily::Ldpc => {
            let (dv, dc) = if name == "ldpc1" { (6, 12) } else { (4, 8) };
            let h = build_regular(info.n, dv, dc, 6, &mut ChaCha8Rng::seed_from_u64(seed))?;
            Ok(Codec::from_ldpc(name, h))
        }
        CodecFamily::Turbo => {
            let spec = turbo_with_block_len(name, info.k, interleaver, seed)?;
            Ok(Codec::from_turbo(name, TurboCodec::new(spec)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turbo_presets_match_table() {
        for name in ["turbo1", "turbo2"] {
            let info = preset_info(name).unwrap();
            let c = preset(name, InterleaverKind::UniformRandom, 1).unwrap();
            assert_eq!(c.block_len(), info.n);
            assert_eq!(c.syndrome_len(), info.n - info.k);
            assert_eq!(c.family(), CodecFamily::Turbo);
        }
        let t1 = preset("turbo1", InterleaverKind::Structured, 0).unwrap();
        let spec = t1.as_turbo().unwrap().spec();
        assert!((spec.nominal_rate() - 1.0 / 9.0).abs() < 1e-15);
        let t2 = turbo_with_block_len("turbo2", 2178, InterleaverKind::Structured, 0).unwrap();
        assert!((t2.nominal_rate() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ldpc1_preset_is_regular_half_rate() {
        let c = preset("ldpc1", InterleaverKind::UniformRandom, 7).unwrap();
        let h = c.as_ldpc().unwrap();
        assert_eq!((h.n(), h.m()), (3600, 1800));
        assert_eq!(h.regular_degrees(), Some((6, 12)));
        assert!((c.rate() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(matches!(
            preset("ldpc9", InterleaverKind::UniformRandom, 0),
            Err(Error::UnknownPreset(_))
        ));
    }

    #[test]
    fn zero_syndrome_decodes_to_zero_for_both_families() {
        for name in ["ldpc1", "turbo1"] {
            let c = preset(name, InterleaverKind::UniformRandom, 3).unwrap();
            let out = c
                .decode(&vec![0; c.syndrome_len()], 0.03, &DecodeOptions::default())
                .unwrap();
            assert!(out.estimate.iter().all(|&b| b == 0), "{name}");
            assert!(out.claimed_success);
        }
    }
}
