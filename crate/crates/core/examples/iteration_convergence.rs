//! Residual QBER after each turbo iteration, averaged over trials.
//!
//! ```text
//! cargo run --release --example iteration_convergence
//! ```

use qkd_recon::bb84::run_exchange;
use qkd_recon::channels::ChannelStack;
use qkd_recon::codec::{preset, DecodeOptions};
use qkd_recon::reconcile::{decoder_prior, reconcile, ReconcileConfig};
use qkd_recon::turbo::InterleaverKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qkd_recon::Result<()> {
    let codec = preset("turbo1", InterleaverKind::UniformRandom, 1)?;
    let iterations = 14;
    let trials = 20;
    let cfg = ReconcileConfig {
        decode: DecodeOptions {
            iterations: Some(iterations),
            early_stop: false,
            record_history: true,
        },
        ..ReconcileConfig::default()
    };
    // A waterfall point, where iterations visibly matter.
    let p = 0.345;
    let stack = ChannelStack::eve_then_channel(p, 0.0)?;
    let mut sums = vec![0.0; iterations];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..trials {
        let pair = run_exchange(2 * codec.block_len() + 400, &stack, &mut rng)?;
        let r = reconcile(&pair, &codec, decoder_prior(pair.qber()), &cfg)?;
        for (s, q) in sums.iter_mut().zip(&r.iterations_trace) {
            *s += q;
        }
    }
    println!("p={p}, {trials} trials");
    for (i, s) in sums.iter().enumerate() {
        println!("iteration {:>2}: mean residual qber {:.5}", i + 1, s / trials as f64);
    }
    Ok(())
}
