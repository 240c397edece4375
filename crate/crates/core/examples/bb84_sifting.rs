//! Prepare, transmit, measure and sift over a noiseless line and under a
//! full intercept-resend attack, then estimate the QBER from a disclosed
//! sample.
//!
//! ```text
//! cargo run --release --example bb84_sifting
//! ```

use qkd_recon::bb84::{estimate_parameters, run_exchange};
use qkd_recon::channels::ChannelStack;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qkd_recon::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 100_000;

    let clean = run_exchange(n, &ChannelStack::identity(), &mut rng)?;
    println!("noiseless: kept {} of {n}, qber {:.4}", clean.len(), clean.qber());

    let attacked = run_exchange(n, &ChannelStack::eve_then_channel(0.0, 1.0)?, &mut rng)?;
    println!("intercept-resend s=1: kept {}, qber {:.4} (expected 0.25)", attacked.len(), attacked.qber());

    let est = estimate_parameters(&attacked, 0.1, &mut rng)?;
    println!(
        "disclosed {} bits, estimated qber {:.4}, {} bits left for reconciliation",
        est.disclosed_count,
        est.qber_estimate,
        est.remaining_pair.len()
    );
    Ok(())
}
