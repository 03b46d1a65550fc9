//! Benchmark harness and command-line front end for the path-sum simulator.
//!
//! [`plan`] runs sweeps over the generator families, [`output`] writes the CSV
//! and plot series, [`memory`] measures peak usage and [`cli`] ties them to the
//! `pathsum` binary.

pub mod cli;
pub mod memory;
pub mod output;
pub mod plan;

pub use cli::cli_main;
pub use memory::{CountingAllocator, MemorySource, PeakMeter};
pub use output::{write_csv, write_csv_to, write_metadata, write_plot_data, OutputError};
pub use plan::{
    run_benchmark, run_benchmark_with, BenchPlan, BenchRecord, BenchReport, Method, PlanError,
    SkippedPoint, DEFAULT_CAP,
};
