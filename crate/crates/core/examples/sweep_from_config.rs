//! Loads a TOML experiment config, runs the sweep and writes the CSV and
//! plot series.
//!
//! ```text
//! cargo run --release --example sweep_from_config -- crates/core/examples/sweep.toml
//! ```

use std::path::PathBuf;

use qkd_recon::experiment::{emit_plotdata, run, write_csv, ExperimentConfig, Figure};

fn main() -> qkd_recon::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sweep.toml")));
    let cfg = ExperimentConfig::load(&path)?;
    cfg.validate()?;
    let out = run(&cfg)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    for s in &out.summary {
        println!(
            "p={} s={} qber {:.5} -> {:.5} ({:?})",
            s.p, s.s, s.qber_pre_mean, s.qber_post_mean, s.advice
        );
    }
    write_csv(&out.rows, &cfg.output_path)?;
    let dir = cfg.output_path.with_extension("plot");
    for f in emit_plotdata(&[cfg.output_path.clone()], Figure::Fig4, &dir)? {
        println!("{}", f.display());
    }
    Ok(())
}
