//! Benchmark result files: the record CSV, its metadata sidecar, and the
//! per-series `.dat` files consumed by plotting tools.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use pathsum_core::Family;
use thiserror::Error;

use crate::plan::{BenchRecord, BenchReport, Method};

pub const CSV_HEADER: [&str; 12] = [
    "family",
    "n",
    "seed",
    "method",
    "trial",
    "wall_time_s",
    "peak_mem_bytes",
    "amp_re",
    "amp_im",
    "recursion_calls",
    "prunes",
    "timed_out",
];

/// Plot value written for a point with no completed trial.
pub const MISSING_SENTINEL: f64 = -1.0;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn optional<T: ToString>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes the CSV header and one row per record to `writer`.
pub fn write_csv_to<W: Write>(records: &[BenchRecord], writer: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(CSV_HEADER)?;
    for r in records {
        out.write_record([
            r.family.name().to_string(),
            r.n.to_string(),
            r.seed.to_string(),
            r.method.name().to_string(),
            r.trial.to_string(),
            r.wall_time_s.to_string(),
            r.peak_mem_bytes.to_string(),
            optional(r.amplitude.map(|a| a.re)),
            optional(r.amplitude.map(|a| a.im)),
            optional(r.recursion_calls),
            optional(r.prunes),
            r.timed_out.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv(records: &[BenchRecord], path: &Path) -> Result<(), OutputError> {
    let file = fs::File::create(path).map_err(io_error(path))?;
    write_csv_to(records, io::BufWriter::new(file)).map_err(|source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

/// Path of the metadata sidecar for a CSV file: `<csv>.meta`.
pub fn metadata_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

/// Writes `key=value` lines describing how `peak_mem_bytes` was measured and
/// which plan points were skipped.
pub fn write_metadata(report: &BenchReport, csv_path: &Path) -> Result<PathBuf, OutputError> {
    let path = metadata_path(csv_path);
    let mut text = String::new();
    text.push_str(&format!("peak_mem_source={}\n", report.memory_source));
    for s in &report.skipped {
        text.push_str(&format!(
            "skipped family={} n={} method={} reason={}\n",
            s.family, s.n, s.method, s.reason
        ));
    }
    fs::write(&path, text).map_err(io_error(&path))?;
    Ok(path)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    Time,
    Space,
}

impl Metric {
    fn name(&self) -> &'static str {
        match self {
            Metric::Time => "time",
            Metric::Space => "space",
        }
    }
}

/// Short family tag used in plot file names.
fn series_prefix(family: Family) -> &'static str {
    match family {
        Family::LayeredHadamard => "h",
        Family::LayeredQft => "lqft",
        Family::HspStandard => "hsp",
    }
}

pub fn series_file_name(family: Family, metric: Metric, method: Method) -> String {
    format!(
        "{}_{}_{}.dat",
        series_prefix(family),
        metric.name(),
        method.name()
    )
}

/// Mean of `values`, or the sentinel when there are none.
pub fn mean_or_sentinel(values: &[f64]) -> f64 {
    if values.is_empty() {
        MISSING_SENTINEL
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Writes one two-column `n mean` file per (family, method, metric) into
/// `dir`, averaging completed trials. Time is in seconds, space in megabytes
/// (10^6 bytes). Returns the files written, sorted by name.
pub fn write_plot_data(records: &[BenchRecord], dir: &Path) -> Result<Vec<PathBuf>, OutputError> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;

    type Series = BTreeMap<usize, Vec<f64>>;
    let mut series: BTreeMap<(Family, Method, Metric), Series> = BTreeMap::new();
    for r in records {
        for metric in [Metric::Time, Metric::Space] {
            let points = series.entry((r.family, r.method, metric)).or_default();
            let values = points.entry(r.n).or_default();
            if r.completed() {
                values.push(match metric {
                    Metric::Time => r.wall_time_s,
                    Metric::Space => r.peak_mem_bytes as f64 / 1e6,
                });
            }
        }
    }

    let mut written = Vec::new();
    for ((family, method, metric), points) in series {
        let unit = match metric {
            Metric::Time => "seconds",
            Metric::Space => "megabytes (10^6 bytes)",
        };
        let mut text = format!(
            "# family={family} method={method} metric={} unit={unit}\n\
             # columns: n mean_over_completed_trials\n\
             # {MISSING_SENTINEL} marks a point where every trial timed out or failed\n",
            metric.name()
        );
        for (n, values) in points {
            text.push_str(&format!("{n} {}\n", mean_or_sentinel(&values)));
        }
        let path = dir.join(series_file_name(family, metric, method));
        fs::write(&path, text).map_err(io_error(&path))?;
        written.push(path);
    }
    written.sort();
    Ok(written)
}
