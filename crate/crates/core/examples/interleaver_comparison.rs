//! Uniform-random against structured interleaving on Turbo1, several
//! random draws.
//!
//! ```text
//! cargo run --release --example interleaver_comparison
//! ```

use qkd_recon::codec::preset;
use qkd_recon::experiment::{run_with_codec, ExperimentConfig};
use qkd_recon::turbo::InterleaverKind;

fn mean_post(cfg: &ExperimentConfig, kind: InterleaverKind, seed: u64) -> qkd_recon::Result<f64> {
    let codec = preset("turbo1", kind, seed)?;
    let out = run_with_codec(cfg, &codec)?;
    Ok(out.rows.iter().map(|r| r.qber_post).sum::<f64>() / out.rows.len() as f64)
}

fn main() -> qkd_recon::Result<()> {
    let mut cfg = ExperimentConfig {
        n_qubits: 10_000,
        p_grid: vec![0.33, 0.345, 0.36],
        trials: 10,
        ..ExperimentConfig::default()
    };
    let structured = mean_post(&cfg, InterleaverKind::Structured, 0)?;
    println!("structured: mean residual qber {structured:.5}");
    for seed in 1..=4 {
        cfg.master_seed = seed;
        let random = mean_post(&cfg, InterleaverKind::UniformRandom, seed)?;
        println!("random draw {seed}: mean residual qber {random:.5}");
    }
    Ok(())
}
