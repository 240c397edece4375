//! Decode time against block length for LDPC and turbo codes.
//!
//! ```text
//! cargo run --release --example complexity_scaling
//! ```

use qkd_recon::codec::{turbo_with_block_len, Codec};
use qkd_recon::ldpc::build_regular;
use qkd_recon::metrics::{complexity_probe, ProbeOptions, ScalingFit};
use qkd_recon::turbo::{InterleaverKind, TurboCodec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn show(name: &str, fit: &ScalingFit) {
    println!("{name} ({})", fit.environment);
    for r in &fit.rows {
        println!("  n={:>7} median {:?}", r.n, r.median);
    }
    println!(
        "  exponent {:.3} ± {:.3}, after dividing out ln n {:.3} ± {:.3}",
        fit.exponent.slope,
        fit.exponent.slope_half_width,
        fit.log_corrected_exponent.slope,
        fit.log_corrected_exponent.slope_half_width
    );
}

fn main() -> qkd_recon::Result<()> {
    let opts = ProbeOptions {
        trials: 3,
        iterations: 10,
        prior_flip: 0.03,
        seed: 1,
    };
    let sizes = [1_000, 10_000, 100_000];

    let ldpc = complexity_probe(
        |n| {
            let n = n / 12 * 12;
            Ok(Codec::from_ldpc("ldpc", build_regular(n, 6, 12, 0, &mut ChaCha8Rng::seed_from_u64(n as u64))?))
        },
        &sizes,
        &opts,
    )?;
    show("ldpc (6,12)", &ldpc);

    let turbo = complexity_probe(
        |n| {
            // Nine code bits per input bit.
            let spec = turbo_with_block_len("turbo1", n / 9, InterleaverKind::UniformRandom, 1)?;
            Ok(Codec::from_turbo("turbo", TurboCodec::new(spec)?))
        },
        &sizes,
        &opts,
    )?;
    show("turbo1 components", &turbo);
    Ok(())
}
