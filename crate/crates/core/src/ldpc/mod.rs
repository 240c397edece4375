//! Regular LDPC codes for syndrome reconciliation.

mod alist;
mod bp;
mod build;
mod matrix;

pub use alist::{read_alist, write_alist};
pub use bp::{bp_syndrome_decode, BpDecodeTrace, BpDecoder, BpOptions, BpOutput};
pub use build::{build_regular, build_regular_with_budget, DEFAULT_RETRY_BUDGET};
pub use matrix::ParityCheckMatrix;
