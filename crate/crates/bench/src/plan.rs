//! Benchmark plans and the sweep that executes them.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use pathsum_core::{
    statevector_simulate_until, Amplitude, AmplitudeQuery, EngineError, EngineOptions, Family,
    PathSumEngine, Seed, StateVectorError, MAX_QUBITS, MAX_STATEVECTOR_QUBITS,
};
use thiserror::Error;

use crate::memory::{MemorySource, PeakMeter};

/// Default per-run time cap, one hour.
pub const DEFAULT_CAP: Duration = Duration::from_secs(3600);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    PathSum,
    StateVector,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::PathSum, Method::StateVector];

    pub fn name(&self) -> &'static str {
        match self {
            Method::PathSum => "pathsum",
            Method::StateVector => "statevector",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected pathsum or statevector)"))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("plan has no {0}")]
    Empty(&'static str),
    #[error("n range {n_min}..={n_max} is empty")]
    EmptyRange { n_min: usize, n_max: usize },
    #[error("{family} needs n >= {min}, plan starts at {n_min}")]
    BelowFamilyMinimum {
        family: Family,
        min: usize,
        n_min: usize,
    },
    #[error("n_max {0} exceeds the {MAX_QUBITS}-qubit limit")]
    AboveMaximum(usize),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("time cap must be positive")]
    NoTime,
}

#[derive(Clone, Debug)]
pub struct BenchPlan {
    pub families: Vec<Family>,
    pub n_min: usize,
    pub n_max: usize,
    pub seeds: Vec<u64>,
    pub methods: Vec<Method>,
    pub trials: u32,
    pub cap: Duration,
    /// HSP register-a size override.
    pub a_size: Option<usize>,
    /// Path-sum pruning.
    pub prune: bool,
}

impl BenchPlan {
    /// Both methods, seed 1, three trials, one-hour cap, pruning on.
    pub fn new(families: Vec<Family>, n_min: usize, n_max: usize) -> Self {
        Self {
            families,
            n_min,
            n_max,
            seeds: vec![1],
            methods: Method::ALL.to_vec(),
            trials: 3,
            cap: DEFAULT_CAP,
            a_size: None,
            prune: true,
        }
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        if self.families.is_empty() {
            return Err(PlanError::Empty("families"));
        }
        if self.methods.is_empty() {
            return Err(PlanError::Empty("methods"));
        }
        if self.seeds.is_empty() {
            return Err(PlanError::Empty("seeds"));
        }
        if self.n_min > self.n_max {
            return Err(PlanError::EmptyRange {
                n_min: self.n_min,
                n_max: self.n_max,
            });
        }
        if self.n_max > MAX_QUBITS {
            return Err(PlanError::AboveMaximum(self.n_max));
        }
        for &family in &self.families {
            if self.n_min < family.min_qubits() {
                return Err(PlanError::BelowFamilyMinimum {
                    family,
                    min: family.min_qubits(),
                    n_min: self.n_min,
                });
            }
        }
        if self.trials == 0 {
            return Err(PlanError::NoTrials);
        }
        if self.cap.is_zero() {
            return Err(PlanError::NoTime);
        }
        Ok(())
    }
}

/// One timed run of one method on one circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub method: Method,
    /// 1-based.
    pub trial: u32,
    pub wall_time_s: f64,
    pub peak_mem_bytes: u64,
    /// `None` when the run timed out or failed.
    pub amplitude: Option<Amplitude>,
    pub recursion_calls: Option<u64>,
    pub prunes: Option<u64>,
    pub timed_out: bool,
    pub error: Option<String>,
}

impl BenchRecord {
    pub fn completed(&self) -> bool {
        !self.timed_out && self.error.is_none()
    }
}

/// A plan point that was not run, and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedPoint {
    pub family: Family,
    pub n: usize,
    pub method: Method,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub skipped: Vec<SkippedPoint>,
    pub memory_source: MemorySource,
}

pub fn run_benchmark(plan: &BenchPlan) -> Result<BenchReport, PlanError> {
    run_benchmark_with(plan, &PeakMeter::detect(), |_| {})
}

/// Runs every `(family, n, seed, method, trial)` point in plan order. A failed
/// or timed-out run is recorded and the sweep moves on.
pub fn run_benchmark_with(
    plan: &BenchPlan,
    meter: &PeakMeter,
    mut on_record: impl FnMut(&BenchRecord),
) -> Result<BenchReport, PlanError> {
    plan.validate()?;
    let mut records = Vec::new();
    let mut skipped = Vec::new();

    for &family in &plan.families {
        for n in plan.n_min..=plan.n_max {
            for &seed in &plan.seeds {
                let circuit = family.generate(n, Seed(seed), plan.a_size);
                for &method in &plan.methods {
                    if method == Method::StateVector && n > MAX_STATEVECTOR_QUBITS {
                        let reason = format!(
                            "state vector needs {} bytes at n={n}; limit is {MAX_STATEVECTOR_QUBITS} qubits",
                            pathsum_core::statevector::statevector_bytes(n)
                        );
                        if !skipped.iter().any(|s: &SkippedPoint| {
                            s.family == family && s.n == n && s.method == method
                        }) {
                            skipped.push(SkippedPoint {
                                family,
                                n,
                                method,
                                reason,
                            });
                        }
                        continue;
                    }
                    for trial in 1..=plan.trials {
                        let mut record = BenchRecord {
                            family,
                            n,
                            seed,
                            method,
                            trial,
                            wall_time_s: 0.0,
                            peak_mem_bytes: 0,
                            amplitude: None,
                            recursion_calls: None,
                            prunes: None,
                            timed_out: false,
                            error: None,
                        };
                        match &circuit {
                            Ok(c) => run_once(c, method, plan, meter, &mut record),
                            Err(e) => record.error = Some(e.to_string()),
                        }
                        on_record(&record);
                        records.push(record);
                    }
                }
            }
        }
    }

    Ok(BenchReport {
        records,
        skipped,
        memory_source: meter.source(),
    })
}

fn run_once(
    circuit: &pathsum_core::Circuit,
    method: Method,
    plan: &BenchPlan,
    meter: &PeakMeter,
    record: &mut BenchRecord,
) {
    let query = AmplitudeQuery::zero(circuit.num_qubits());
    meter.reset();
    let started = Instant::now();
    let deadline = started + plan.cap;

    match method {
        Method::PathSum => {
            let engine = PathSumEngine::new(circuit);
            let options = EngineOptions {
                prune: plan.prune,
                deadline: Some(deadline),
            };
            match engine.amplitude(&query, options) {
                Ok((amplitude, stats)) => {
                    record.amplitude = Some(amplitude);
                    record.recursion_calls = Some(stats.recursion_calls);
                    record.prunes = Some(stats.prunes);
                }
                Err(EngineError::DeadlineExceeded(stats)) => {
                    record.timed_out = true;
                    record.recursion_calls = Some(stats.recursion_calls);
                    record.prunes = Some(stats.prunes);
                }
                Err(e) => record.error = Some(e.to_string()),
            }
        }
        Method::StateVector => {
            match statevector_simulate_until(circuit, query.start, Some(deadline)) {
                Ok(vector) => record.amplitude = Some(vector.amplitude(query.end)),
                Err(StateVectorError::DeadlineExceeded { .. }) => record.timed_out = true,
                Err(e) => record.error = Some(e.to_string()),
            }
        }
    }

    record.wall_time_s = started.elapsed().as_secs_f64();
    record.peak_mem_bytes = meter.peak_bytes();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(families: Vec<Family>, n_min: usize, n_max: usize) -> BenchPlan {
        BenchPlan {
            cap: Duration::from_secs(60),
            ..BenchPlan::new(families, n_min, n_max)
        }
    }

    #[test]
    fn record_count_is_methods_times_trials() {
        let report = run_benchmark(&quick(vec![Family::LayeredHadamard], 4, 4)).unwrap();
        assert_eq!(report.records.len(), 6);
        let order: Vec<(Method, u32)> =
            report.records.iter().map(|r| (r.method, r.trial)).collect();
        assert_eq!(
            order,
            vec![
                (Method::PathSum, 1),
                (Method::PathSum, 2),
                (Method::PathSum, 3),
                (Method::StateVector, 1),
                (Method::StateVector, 2),
                (Method::StateVector, 3),
            ]
        );
        assert!(report.records.iter().all(BenchRecord::completed));
        assert!(report.records[0].recursion_calls.is_some());
        assert!(report.records[3].recursion_calls.is_none());
    }

    #[test]
    fn plan_validation() {
        assert_eq!(
            quick(vec![Family::HspStandard], 4, 6).validate(),
            Err(PlanError::BelowFamilyMinimum {
                family: Family::HspStandard,
                min: 5,
                n_min: 4
            })
        );
        assert!(matches!(
            quick(vec![Family::HspStandard], 7, 6).validate(),
            Err(PlanError::EmptyRange { .. })
        ));
        assert_eq!(
            quick(vec![], 5, 6).validate(),
            Err(PlanError::Empty("families"))
        );
        let mut plan = quick(vec![Family::HspStandard], 5, 6);
        plan.trials = 0;
        assert_eq!(plan.validate(), Err(PlanError::NoTrials));
        plan.trials = 1;
        plan.cap = Duration::ZERO;
        assert_eq!(plan.validate(), Err(PlanError::NoTime));
        assert!(run_benchmark(&quick(vec![Family::LayeredQft], 2, 3)).is_err());
    }

    #[test]
    fn wide_statevector_points_are_skipped_with_reason() {
        let mut plan = quick(vec![Family::HspStandard], 30, 30);
        plan.trials = 1;
        plan.a_size = Some(5);
        let report = run_benchmark(&plan).unwrap();
        assert_eq!(report.records.len(), 1);
        assert_eq!(report.records[0].method, Method::PathSum);
        assert!(report.records[0].completed());
        assert_eq!(report.skipped.len(), 1);
        assert!(report.skipped[0].reason.contains("17179869184 bytes"));
    }

    #[test]
    fn expired_cap_marks_timeouts() {
        let mut plan = quick(vec![Family::LayeredHadamard], 12, 12);
        plan.cap = Duration::from_nanos(1);
        plan.trials = 1;
        plan.prune = false;
        let report = run_benchmark(&plan).unwrap();
        for r in &report.records {
            assert!(r.timed_out, "{r:?}");
            assert!(r.wall_time_s >= 1e-9);
            assert!(r.amplitude.is_none());
        }
    }

    #[test]
    fn generation_failures_stay_in_the_row() {
        let mut plan = quick(vec![Family::HspStandard], 5, 6);
        plan.a_size = Some(5);
        plan.trials = 1;
        plan.methods = vec![Method::PathSum];
        let report = run_benchmark(&plan).unwrap();
        assert_eq!(report.records.len(), 2);
        assert!(report.records[0].error.is_some());
        assert!(report.records[1].completed());
    }

    #[test]
    fn method_names_parse() {
        assert_eq!("pathsum".parse::<Method>().unwrap(), Method::PathSum);
        assert_eq!(
            "statevector".parse::<Method>().unwrap(),
            Method::StateVector
        );
        assert!("sv".parse::<Method>().is_err());
    }
}
