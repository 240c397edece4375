//! Builds a regular LDPC code and reconciles a noisy sifted key with
//! syndrome belief propagation.
//!
//! ```text
//! cargo run --release --example ldpc_reconcile -- 0.04
//! ```

use qkd_recon::bb84::run_exchange;
use qkd_recon::channels::ChannelStack;
use qkd_recon::codec::Codec;
use qkd_recon::ldpc::build_regular;
use qkd_recon::reconcile::{decoder_prior, reconcile, ReconcileConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qkd_recon::Result<()> {
    let p: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.04);
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let h = build_regular(3600, 6, 12, 6, &mut rng)?;
    println!(
        "H: {} x {}, rank {}, residual 4-cycles {}",
        h.m(),
        h.n(),
        h.rank(),
        h.four_cycle_count()
    );
    let codec = Codec::from_ldpc("ldpc", h);

    let pair = run_exchange(40_000, &ChannelStack::eve_then_channel(p, 0.0)?, &mut rng)?;
    let prior = decoder_prior(pair.qber());
    let report = reconcile(&pair, &codec, prior, &ReconcileConfig::default())?;
    println!(
        "p={p}: {} blocks, qber {:.5} -> {:.5}, leaked {} bits, success {} (claimed {})",
        report.blocks,
        report.qber_before,
        report.qber_after,
        report.leakage_bits,
        report.success,
        report.claimed_success
    );
    println!("iterations per block: {:?}", report.iterations_used);
    Ok(())
}
