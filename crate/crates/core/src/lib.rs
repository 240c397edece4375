//! BB84 key exchange simulation with syndrome-based information
//! reconciliation.
//!
//! A run goes through four stages:
//!
//! 1. [`bb84::run_exchange`] pushes qubits through a [`channels::ChannelStack`]
//!    (depolarizing noise and intercept-resend) and sifts a key pair.
//! 2. [`bb84::estimate_parameters`] discloses a sample to estimate the QBER.
//! 3. [`reconcile::reconcile`] splits the key into blocks and corrects the
//!    receiver from the sender's syndromes with a [`codec::Codec`]. The codec
//!    is either a regular LDPC code decoded by belief propagation or a serial
//!    turbo code decoded by iterated BCJR.
//! 4. [`metrics`] scores the result and [`experiment`] sweeps whole grids to
//!    CSV.
//!
//! The `examples/` directory has one program per capability:
//!
//! | example | shows |
//! |---------|-------|
//! | `bb84_sifting` | exchange, sifting and QBER estimation |
//! | `depolarizing_channel` | measured against analytic sifted QBER |
//! | `ldpc_reconcile` | regular LDPC construction and BP reconciliation |
//! | `turbo_reconcile` | turbo presets, rate check, both directions |
//! | `iteration_convergence` | residual QBER per turbo iteration |
//! | `interleaver_comparison` | random against structured interleaving |
//! | `secret_information` | the secret information bound under attack |
//! | `complexity_scaling` | decode time against block length |
//! | `alist_roundtrip` | alist matrix I/O |
//! | `sweep_from_config` | TOML config to CSV and plot series |
//!
//! The `qkd-recon` binary wraps [`experiment`] for the command line.

pub mod bb84;
pub mod channels;
pub mod codec;
pub mod error;
pub mod experiment;
pub mod gf2;
pub mod ldpc;
pub mod metrics;
pub mod oracle;
pub mod pauli;
pub mod reconcile;
pub mod selfcheck;
pub mod turbo;

pub use error::{Error, Result};
