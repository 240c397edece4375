//! Seeded parameter sweeps, CSV output and plot series.

mod config;
mod plot;
mod runner;
pub mod seed;

pub use config::{ExperimentConfig, PriorSource};
pub use plot::{build_series, emit_plotdata, Figure, Series};
pub use runner::{
    build_codec, csv_bytes, grid, read_csv, run, run_with_codec, summarize, sweep_iterations,
    sweep_iterations_with_codec, write_csv, GridPoint, PointSummary, ResultRow, RunOutput, CSV_HEADER,
    SCHEMA_VERSION,
};
