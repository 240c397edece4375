//! Secret information bound before and after reconciliation while an
//! eavesdropper intercepts a growing fraction of qubits.
//!
//! ```text
//! cargo run --release --example secret_information
//! ```

use qkd_recon::channels::{analytic_sifted_qber, DepolarizingParams, InterceptResendParams};
use qkd_recon::experiment::{run, ExperimentConfig};
use qkd_recon::metrics::{h2, secret_info_bound, SecretInfoPoint};

fn main() -> qkd_recon::Result<()> {
    for delta in [0.0, 0.05, 0.11, 0.25, 0.5] {
        let pt = SecretInfoPoint::at(delta)?;
        println!("delta {delta:<5} h2 {:.6} bound {:.6}", h2(delta), pt.bound);
    }

    let cfg = ExperimentConfig {
        n_qubits: 10_000,
        p_grid: vec![0.02],
        s_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        trials: 5,
        ..ExperimentConfig::default()
    };
    let out = run(&cfg)?;
    println!("{:>5} {:>8} {:>8} {:>8}", "s", "pre", "post", "analytic");
    for s in &cfg.s_grid {
        let rows: Vec<_> = out.rows.iter().filter(|r| r.s == *s).collect();
        let m = |f: fn(&qkd_recon::experiment::ResultRow) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / rows.len() as f64;
        let q = analytic_sifted_qber(DepolarizingParams::new(0.02)?, InterceptResendParams::new(*s)?);
        println!(
            "{s:>5} {:>8.4} {:>8.4} {:>8.4}",
            m(|r| r.secret_bound_pre),
            m(|r| r.secret_bound_post),
            secret_info_bound(q)?
        );
    }
    Ok(())
}
