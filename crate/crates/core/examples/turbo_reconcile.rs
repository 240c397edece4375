//! Reconciles with the serial turbo preset, forward and reverse.
//!
//! ```text
//! cargo run --release --example turbo_reconcile -- turbo1 0.06
//! ```

use qkd_recon::bb84::run_exchange;
use qkd_recon::channels::{analytic_sifted_qber, ChannelStack, DepolarizingParams, InterceptResendParams};
use qkd_recon::codec::preset;
use qkd_recon::reconcile::{decoder_prior, rate_check, reconcile, Direction, ReconcileConfig};
use qkd_recon::turbo::InterleaverKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qkd_recon::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "turbo1".into());
    let p: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.06);

    let codec = preset(&name, InterleaverKind::UniformRandom, 3)?;
    let q = analytic_sifted_qber(DepolarizingParams::new(p)?, InterceptResendParams::new(0.0)?);
    let check = rate_check(&codec, q);
    println!(
        "{name}: n={} syndrome={} leak rate {:.3} vs h2(q)={:.3} -> {:?}",
        codec.block_len(),
        codec.syndrome_len(),
        check.leak_rate,
        check.entropy,
        check.advice
    );

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pair = run_exchange(4 * codec.block_len() + 1000, &ChannelStack::eve_then_channel(p, 0.0)?, &mut rng)?;
    for direction in [Direction::Forward, Direction::Reverse] {
        let cfg = ReconcileConfig {
            direction,
            parallel: true,
            ..ReconcileConfig::default()
        };
        let r = reconcile(&pair, &codec, decoder_prior(q), &cfg)?;
        println!(
            "{direction:?}: {} blocks, qber {:.5} -> {:.5}, remainder {} bits, {:?}",
            r.blocks, r.qber_before, r.qber_after, r.remainder_bits, r.wall_time
        );
    }
    Ok(())
}
