//! Serial turbo codes built from feedforward convolutional components.

mod conv;
mod interleaver;
mod serial;
mod siso;

pub use conv::{conv_encode, ComponentSyndromeFormer, ConvCodeSpec};
pub use interleaver::{make_interleaver, Interleaver, InterleaverKind};
pub use serial::{
    parity_check_of, serial_encode, turbo_syndrome_decode, SerialTurboSpec, TurboCodec,
    TurboOptions, TurboTrace, DEFAULT_ITERATIONS,
};
pub use siso::{bcjr_siso, SisoMode, SisoResult, EVIDENCE_FLOOR};
