//! Measured sifted QBER against the closed form for a grid of depolarizing
//! strengths and interception probabilities.
//!
//! ```text
//! cargo run --release --example depolarizing_channel
//! ```

use qkd_recon::bb84::run_exchange;
use qkd_recon::channels::{analytic_sifted_qber, ChannelStack, DepolarizingParams, InterceptResendParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qkd_recon::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!("{:>5} {:>5} {:>9} {:>9}", "p", "s", "measured", "analytic");
    for s in [0.0, 0.5] {
        for p in [0.0, 0.03, 0.06, 0.09, 0.3] {
            let pair = run_exchange(80_000, &ChannelStack::eve_then_channel(p, s)?, &mut rng)?;
            let q = analytic_sifted_qber(DepolarizingParams::new(p)?, InterceptResendParams::new(s)?);
            println!("{p:>5} {s:>5} {:>9.4} {q:>9.4}", pair.qber());
        }
    }
    Ok(())
}
