//! Seed splitting.
//!
//! Every trial draws from its own ChaCha8 stream seeded with
//! `mix(mix(mix(master) ^ grid_index) ^ trial)`, where `mix` is the
//! SplitMix64 finalizer. The code itself (LDPC matrix, random interleaver) is
//! built from `mix(master ^ CODE_SALT)`, so all trials share one code.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
pub const CODE_SALT: u64 = 0x5EED_C0DE_0000_0001;

/// SplitMix64 step: add the golden gamma, then finalize.
pub fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(master: u64, grid_index: usize, trial: usize) -> u64 {
    mix(mix(mix(master) ^ grid_index as u64) ^ trial as u64)
}

pub fn code_seed(master: u64) -> u64 {
    mix(master ^ CODE_SALT)
}
