use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use stratcat::category::rel::RelError;
use stratcat::category::CategoryError;
use stratcat::formula::FormulaError;
use stratcat::model::ModelError;
use stratcat::stratify::StratifyError;
use stratcat::transform::TransformError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_MALFORMED: u8 = 3;
pub const EXIT_CAP: u8 = 4;

/// Why a record carries no payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Malformed(String),
    Cap(String),
}

impl Failure {
    pub fn malformed(e: impl ToString) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        Failure::malformed(e)
    }
}

impl From<StratifyError> for Failure {
    fn from(e: StratifyError) -> Self {
        match e {
            StratifyError::FeasibilityCap { .. } => Failure::Cap(e.to_string()),
            other => Failure::malformed(other),
        }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::Stratify(s) => s.into(),
            other => Failure::malformed(other),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::TooLarge { .. } => Failure::Cap(e.to_string()),
            ModelError::Transform(t) => t.into(),
            other => Failure::malformed(other),
        }
    }
}

impl From<CategoryError> for Failure {
    fn from(e: CategoryError) -> Self {
        match e {
            CategoryError::FeasibilityCap { .. } => Failure::Cap(e.to_string()),
            other => Failure::malformed(other),
        }
    }
}

impl From<RelError> for Failure {
    fn from(e: RelError) -> Self {
        match e {
            RelError::CarrierOverflow { .. } => Failure::Cap(e.to_string()),
            other => Failure::malformed(other),
        }
    }
}

/// A computed result; `violation` marks a failed theorem check.
pub struct Outcome {
    pub payload: Value,
    pub violation: bool,
}

impl Outcome {
    pub fn ok(payload: impl Serialize) -> Result<Self, Failure> {
        Ok(Outcome { payload: serde_json::to_value(payload).expect("serializable payload"), violation: false })
    }

    pub fn checked(payload: impl Serialize, holds: bool) -> Result<Self, Failure> {
        Ok(Outcome { payload: serde_json::to_value(payload).expect("serializable payload"), violation: !holds })
    }
}

pub type Work = Box<dyn FnOnce() -> Result<Outcome, Failure> + Send>;

pub struct Job {
    pub input: String,
    pub work: Work,
}

impl Job {
    pub fn new(input: impl Into<String>, work: impl FnOnce() -> Result<Outcome, Failure> + Send + 'static) -> Self {
        Job { input: input.into(), work: Box::new(work) }
    }

    pub fn failed(input: impl Into<String>, f: Failure) -> Self {
        Job::new(input, move || Err(f))
    }
}

#[derive(Serialize)]
pub struct Record {
    pub input: String,
    pub subcommand: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

impl Record {
    pub fn exit_code(&self) -> u8 {
        match self.status {
            "ok" => EXIT_OK,
            "theorem-violation" => EXIT_VIOLATION,
            "feasibility-cap" => EXIT_CAP,
            _ => EXIT_MALFORMED,
        }
    }
}

/// Runs the jobs on `threads` workers and returns records in input order.
pub fn run(subcommand: &str, jobs: Vec<Job>, threads: usize) -> Vec<Record> {
    let exec = |job: Job| {
        let start = Instant::now();
        let result = (job.work)();
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        let (status, payload, error) = match result {
            Ok(o) if o.violation => ("theorem-violation", Some(o.payload), None),
            Ok(o) => ("ok", Some(o.payload), None),
            Err(Failure::Malformed(m)) => ("malformed-input", None, Some(m)),
            Err(Failure::Cap(m)) => ("feasibility-cap", None, Some(m)),
        };
        Record { input: job.input, subcommand: subcommand.to_string(), status, payload, error, elapsed_ms }
    };
    if threads <= 1 {
        return jobs.into_iter().map(exec).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    pool.install(|| jobs.into_par_iter().map(exec).collect())
}

/// The run's exit code: malformed input outranks a feasibility cap, which
/// outranks a theorem violation.
pub fn exit_code(records: &[Record]) -> u8 {
    let codes: Vec<u8> = records.iter().map(Record::exit_code).collect();
    [EXIT_MALFORMED, EXIT_CAP, EXIT_VIOLATION].into_iter().find(|c| codes.contains(c)).unwrap_or(EXIT_OK)
}

pub fn render(r: &Record, pretty: bool) -> String {
    if !pretty {
        return serde_json::to_string(r).expect("record serializes");
    }
    let mut out = format!("{} [{}] {} ({:.1} ms)\n", r.input, r.subcommand, r.status, r.elapsed_ms);
    if let Some(e) = &r.error {
        out.push_str(&format!("  error: {e}\n"));
    }
    if let Some(p) = &r.payload {
        for line in serde_json::to_string_pretty(p).expect("payload serializes").lines() {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out.truncate(out.trim_end().len());
    out
}
