//! The `pathsum` command line.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, bad bitstrings,
//! flag combinations that make no sense), 2 when the requested work fails.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};
use pathsum_core::text::BasisStateError;
use pathsum_core::{
    parse_basis_state, read_circuit, serialize_circuit, statevector_amplitude, AmplitudeQuery,
    EngineOptions, Family, PathSumEngine, Seed,
};

use crate::memory::PeakMeter;
use crate::output::{write_csv, write_csv_to, write_metadata, write_plot_data, OutputError};
use crate::plan::{run_benchmark_with, BenchPlan, Method};

#[derive(Debug, Parser)]
#[command(
    name = "pathsum",
    version,
    about = "Path-sum quantum circuit simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute one amplitude <end|C|start>.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        /// Bitstring, qubit 0 first.
        #[arg(long)]
        start: String,
        #[arg(long)]
        end: String,
        #[arg(long, default_value = "pathsum")]
        method: Method,
        /// Disable reachability pruning (pathsum only).
        #[arg(long)]
        no_prune: bool,
        /// Print traversal counters (pathsum only).
        #[arg(long)]
        stats: bool,
        /// Split the first branching gate across two threads (pathsum only).
        #[arg(long)]
        parallel: bool,
    },
    /// Write a benchmark circuit in the text format.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Size of the HSP `a` register.
        #[arg(long)]
        a_size: Option<usize>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark sweep of <0...0|C|0...0>.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        family: Vec<Family>,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        seed: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        /// Per-run time cap in seconds.
        #[arg(long, default_value_t = 3600.0)]
        cap: f64,
        #[arg(long, value_delimiter = ',', default_value = "pathsum,statevector")]
        methods: Vec<Method>,
        /// CSV output; standard output when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Directory for the per-series `.dat` files.
        #[arg(long)]
        plots: Option<PathBuf>,
        #[arg(long)]
        a_size: Option<usize>,
        #[arg(long)]
        no_prune: bool,
    },
}

enum Failure {
    Usage(clap::Error),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<OutputError> for Failure {
    fn from(e: OutputError) -> Self {
        Failure::Runtime(e.into())
    }
}

fn usage(kind: ErrorKind, message: impl std::fmt::Display) -> Failure {
    Failure::Usage(Cli::command().error(kind, message))
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn cli_main<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };

    match run(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(Failure::Usage(e)) => {
            let _ = write!(stderr, "{}", e.render());
            1
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(stderr, "error: {e:#}");
            2
        }
    }
}

fn run(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Simulate {
            circuit,
            start,
            end,
            method,
            no_prune,
            stats,
            parallel,
        } => {
            if method == Method::StateVector {
                let flag = [
                    (no_prune, "--no-prune"),
                    (stats, "--stats"),
                    (parallel, "--parallel"),
                ]
                .into_iter()
                .find_map(|(set, name)| set.then_some(name));
                if let Some(flag) = flag {
                    return Err(usage(
                        ErrorKind::ArgumentConflict,
                        format!("{flag} only applies to --method pathsum"),
                    ));
                }
            }
            if start.chars().count() != end.chars().count() {
                return Err(usage(
                    ErrorKind::ValueValidation,
                    format!(
                        "--start has length {} but --end has length {}",
                        start.chars().count(),
                        end.chars().count()
                    ),
                ));
            }

            let file = fs::File::open(&circuit)
                .with_context(|| format!("cannot open {}", circuit.display()))?;
            let c = read_circuit(file).with_context(|| circuit.display().to_string())?;
            let n = c.num_qubits();
            let parse = |flag: &str, text: &str| {
                parse_basis_state(text, n).map_err(|e| match e {
                    BasisStateError::LengthMismatch { expected, got } => usage(
                        ErrorKind::ValueValidation,
                        format!("{flag} has length {got} but the circuit has {expected} qubits"),
                    ),
                    other => usage(ErrorKind::ValueValidation, format!("{flag}: {other}")),
                })
            };
            let query = AmplitudeQuery::new(parse("--start", &start)?, parse("--end", &end)?);

            match method {
                Method::PathSum => {
                    let engine = PathSumEngine::new(&c);
                    let options = EngineOptions {
                        prune: !no_prune,
                        deadline: None,
                    };
                    let (amplitude, counters) = if parallel {
                        engine.amplitude_parallel(&query, options)
                    } else {
                        engine.amplitude(&query, options)
                    }
                    .map_err(anyhow::Error::from)?;
                    print(
                        stdout,
                        format_args!("{:?} {:?}\n", amplitude.re, amplitude.im),
                    )?;
                    if stats {
                        print(
                            stdout,
                            format_args!(
                                "recursion_calls {}\nedges_traversed {}\nprunes {}\nmax_depth_reached {}\n",
                                counters.recursion_calls,
                                counters.edges_traversed,
                                counters.prunes,
                                counters.max_depth_reached
                            ),
                        )?;
                    }
                }
                Method::StateVector => {
                    let amplitude =
                        statevector_amplitude(&c, &query).map_err(anyhow::Error::from)?;
                    print(
                        stdout,
                        format_args!("{:?} {:?}\n", amplitude.re, amplitude.im),
                    )?;
                }
            }
            Ok(())
        }

        Command::Generate {
            family,
            n,
            seed,
            a_size,
            out,
        } => {
            let circuit = family
                .generate(n, Seed(seed), a_size)
                .map_err(|e| usage(ErrorKind::ValueValidation, e))?;
            let text = serialize_circuit(&circuit);
            match out {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => print(stdout, format_args!("{text}"))?,
            }
            Ok(())
        }

        Command::Bench {
            family,
            n_min,
            n_max,
            seed,
            trials,
            cap,
            methods,
            csv,
            plots,
            a_size,
            no_prune,
        } => {
            let cap = Duration::try_from_secs_f64(cap)
                .map_err(|e| usage(ErrorKind::ValueValidation, format!("--cap: {e}")))?;
            let plan = BenchPlan {
                seeds: seed,
                methods,
                trials,
                cap,
                a_size,
                prune: !no_prune,
                ..BenchPlan::new(family, n_min, n_max)
            };
            plan.validate()
                .map_err(|e| usage(ErrorKind::ValueValidation, e))?;

            let meter = PeakMeter::detect();
            let report = run_benchmark_with(&plan, &meter, |r| {
                let outcome = if r.timed_out {
                    "timed out".to_string()
                } else if let Some(e) = &r.error {
                    format!("failed: {e}")
                } else {
                    format!("{:.6}s", r.wall_time_s)
                };
                let _ = writeln!(
                    stderr,
                    "{} n={} seed={} {} trial {}: {outcome}",
                    r.family, r.n, r.seed, r.method, r.trial
                );
            })
            .map_err(|e| usage(ErrorKind::ValueValidation, e))?;

            for s in &report.skipped {
                let _ = writeln!(
                    stderr,
                    "skipped {} n={} {}: {}",
                    s.family, s.n, s.method, s.reason
                );
            }
            match &csv {
                Some(path) => {
                    write_csv(&report.records, path)?;
                    write_metadata(&report, path)?;
                }
                None => {
                    write_csv_to(&report.records, &mut *stdout)
                        .context("cannot write CSV to standard output")?;
                    let _ = writeln!(stderr, "peak_mem_source={}", report.memory_source);
                }
            }
            if let Some(dir) = &plots {
                write_plot_data(&report.records, dir)?;
            }
            Ok(())
        }
    }
}

fn print(out: &mut dyn Write, args: std::fmt::Arguments<'_>) -> anyhow::Result<()> {
    out.write_fmt(args)
        .context("cannot write to standard output")
}
