use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qkd_recon::codec::preset_table;
use qkd_recon::experiment::{
    emit_plotdata, run, sweep_iterations, write_csv, ExperimentConfig, Figure, RunOutput,
};
use qkd_recon::{selfcheck, Error, Result};

#[derive(Parser)]
#[command(name = "qkd-recon", version, about = "BB84 reconciliation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single (p, s) point.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Depolarizing strength (defaults to the first p_grid entry).
        #[arg(long)]
        p: Option<f64>,
        /// Interception probability (defaults to the first s_grid entry).
        #[arg(long)]
        s: Option<f64>,
    },
    /// Run every point of the p and s grids.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Residual error after each listed iteration count.
    SweepIterations {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated iteration counts, at least two distinct.
        #[arg(long, value_delimiter = ',')]
        iteration_list: Option<Vec<usize>>,
    },
    /// Write plot series files from result CSVs.
    Plotdata {
        /// fig4, fig5, fig6 or fig7.
        #[arg(long)]
        figure: String,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(required = true)]
        csv: Vec<PathBuf>,
    },
    /// List code presets.
    Codes,
    /// Run the oracle self-checks.
    Validate,
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// ldpc1, ldpc2, turbo1 or turbo2.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    s_grid: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    n_qubits: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    /// random or structured.
    #[arg(long)]
    interleaver: Option<String>,
    /// Worker threads, 0 for all cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Fill the wall_ms column.
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.seed {
            cfg.master_seed = v;
        }
        if let Some(v) = &self.out {
            cfg.output_path = v.clone();
        }
        if let Some(v) = &self.preset {
            cfg.codec_preset = v.clone();
        }
        if let Some(v) = &self.p_grid {
            cfg.p_grid = v.clone();
        }
        if let Some(v) = &self.s_grid {
            cfg.s_grid = v.clone();
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if let Some(v) = self.n_qubits {
            cfg.n_qubits = v;
        }
        if self.iterations.is_some() {
            cfg.iterations = self.iterations;
        }
        if let Some(v) = &self.interleaver {
            cfg.interleaver_kind = v.clone();
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        cfg.record_timing |= self.timing;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report(cfg: &ExperimentConfig, out: &RunOutput) -> Result<()> {
    write_csv(&out.rows, &cfg.output_path)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{:>6} {:>6} {:>5} {:>6} {:>17} {:>17} {:>7}  advice",
        "p", "s", "iter", "trials", "qber_pre", "qber_post", "claimed"
    );
    for s in &out.summary {
        println!(
            "{:>6} {:>6} {:>5} {:>6} {:>8.5}±{:<8.5} {:>8.5}±{:<8.5} {:>7.3}  {:?}",
            s.p,
            s.s,
            s.iterations,
            s.trials,
            s.qber_pre_mean,
            s.qber_pre_half_width,
            s.qber_post_mean,
            s.qber_post_half_width,
            s.claimed_fraction,
            s.advice
        );
    }
    println!("wrote {} rows to {}", out.rows.len(), cfg.output_path.display());
    Ok(())
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Simulate { run: args, p, s } => {
            let mut cfg = args.config()?;
            cfg.p_grid = vec![p.unwrap_or(cfg.p_grid[0])];
            cfg.s_grid = vec![s.unwrap_or(cfg.s_grid[0])];
            cfg.validate()?;
            report(&cfg, &run(&cfg)?)?;
        }
        Command::Sweep { run: args } => {
            let cfg = args.config()?;
            report(&cfg, &run(&cfg)?)?;
        }
        Command::SweepIterations {
            run: args,
            iteration_list,
        } => {
            let mut cfg = args.config()?;
            if let Some(list) = iteration_list {
                cfg.iteration_list = list;
            }
            cfg.validate()?;
            report(&cfg, &sweep_iterations(&cfg)?)?;
        }
        Command::Plotdata { figure, out, csv } => {
            let figure: Figure = figure.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
            for path in emit_plotdata(&csv, figure, &out)? {
                println!("{}", path.display());
            }
        }
        Command::Codes => {
            println!("{:<7} {:<6} {:>5} {:>5} {:>5}  structure", "name", "family", "n", "k", "rate");
            for p in preset_table() {
                println!(
                    "{:<7} {:<6} {:>5} {:>5} {:>5}  {}",
                    p.name, p.family, p.n, p.k, p.rate, p.structure
                );
            }
        }
        Command::Validate => {
            let mut failed = false;
            for c in selfcheck::run_all() {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed |= !c.passed;
            }
            if failed {
                return Ok(ExitCode::from(4));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
