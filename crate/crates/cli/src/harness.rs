//! Single runs and batches of (instance, strategy) jobs with per-run records
//! and cumulative solved-count tables.

use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use monouf::infer::{
    decode_solution, prepare_query, verify_solution, InferError, InferOptions, SolveError,
    UpdateFunctionTable, Verification,
};
use monouf::problem_file::{parse_problem, ProblemFileError};
use monouf::{EncodeOptions, SolverCommand, SolverError, SolverVerdict, Strategy};
use serde::Serialize;

/// Why a run produced no verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    Timeout,
    /// The solver died, misbehaved or could not be started.
    Crash,
    /// The input or the solver answer is outside what this tool handles,
    /// including an `unknown` answer.
    Unsupported,
    /// `--verify` rejected the decoded solution of a `sat` answer.
    InvalidModel,
}

impl FailureKind {
    pub fn name(self) -> &'static str {
        match self {
            FailureKind::Timeout => "timeout",
            FailureKind::Crash => "crash",
            FailureKind::Unsupported => "unsupported",
            FailureKind::InvalidModel => "invalid-model",
        }
    }
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Sat,
    Unsat,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "sat",
            Verdict::Unsat => "unsat",
        })
    }
}

/// One row of the per-run CSV. Exactly one of `verdict` and `failure` is set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub strategy: String,
    pub verdict: Option<Verdict>,
    pub failure: Option<FailureKind>,
    /// Wall clock from reading the problem text to the answer.
    pub time_ms: f64,
    pub lemma_count: usize,
    pub check_sat_calls: usize,
    /// Result of `--verify` on a `sat` answer; empty when not checked.
    pub verified: Option<bool>,
    pub detail: String,
}

impl RunRecord {
    pub fn solved(&self) -> bool {
        self.verdict.is_some()
    }

    /// `sat`, `unsat` or the failure kind.
    pub fn outcome(&self) -> String {
        match (self.verdict, self.failure) {
            (Some(v), _) => v.to_string(),
            (None, Some(f)) => f.to_string(),
            (None, None) => unreachable!("record without verdict or failure"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub strategy: Strategy,
    pub solver: SolverCommand,
    /// Covers parsing, encoding and solving.
    pub time_limit: Option<Duration>,
    pub verify: bool,
    pub simplify: bool,
    /// Decode tables of `sat` answers even without `verify`.
    pub decode: bool,
    pub emit_script: bool,
}

impl RunConfig {
    pub fn new(strategy: Strategy, solver: SolverCommand) -> Self {
        RunConfig {
            strategy,
            solver,
            time_limit: Some(DEFAULT_TIME_LIMIT),
            verify: false,
            simplify: true,
            decode: false,
            emit_script: false,
        }
    }
}

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);
pub const DEFAULT_PARALLELISM: usize = 16;

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: RunRecord,
    pub tables: Option<Vec<UpdateFunctionTable>>,
    pub script: Option<String>,
}

fn classify_solver(e: &SolverError) -> FailureKind {
    match e {
        SolverError::Timeout => FailureKind::Timeout,
        SolverError::UnsupportedModel { .. } => FailureKind::Unsupported,
        _ => FailureKind::Crash,
    }
}

fn classify(e: &SolveError) -> FailureKind {
    match e {
        SolveError::Solver(s) => classify_solver(s),
        SolveError::Infer(_) | SolveError::Encode(_) => FailureKind::Unsupported,
    }
}

/// Parses, encodes and solves one problem. Only a malformed problem text is
/// an error; everything after parsing ends up in the record.
pub fn run_single(
    instance: &str,
    text: &str,
    config: &RunConfig,
) -> Result<RunOutput, ProblemFileError> {
    let start = Instant::now();
    let problem = parse_problem(text)?;
    let mut record = RunRecord {
        instance: instance.to_string(),
        strategy: config.strategy.name().to_string(),
        verdict: None,
        failure: None,
        time_ms: 0.0,
        lemma_count: 0,
        check_sat_calls: 0,
        verified: None,
        detail: String::new(),
    };
    let mut tables = None;
    let mut script = None;
    let finish = |mut record: RunRecord, tables, script| {
        record.time_ms = start.elapsed().as_secs_f64() * 1e3;
        Ok(RunOutput {
            record,
            tables,
            script,
        })
    };

    let infer = InferOptions {
        simplify: config.simplify,
    };
    let query = match prepare_query(&problem, config.strategy, infer, EncodeOptions::default()) {
        Ok(q) => q,
        Err(e) => {
            record.failure = Some(classify(&e));
            record.detail = e.to_string();
            return finish(record, tables, script);
        }
    };
    record.lemma_count = query.encoded.lemma_count;
    if config.emit_script {
        script = Some(query.script());
    }
    let remaining = match config.time_limit {
        None => None,
        Some(limit) => match limit.checked_sub(start.elapsed()) {
            Some(r) if !r.is_zero() => Some(r),
            _ => {
                record.failure = Some(FailureKind::Timeout);
                record.detail = "time limit reached while encoding".into();
                return finish(record, tables, script);
            }
        },
    };
    let run = match query.solve(&config.solver, remaining) {
        Ok(run) => run,
        Err(e) => {
            record.failure = Some(classify(&e));
            record.detail = e.to_string();
            return finish(record, tables, script);
        }
    };
    record.lemma_count = run.lemma_count;
    record.check_sat_calls = run.check_sat_calls;
    match run.verdict {
        SolverVerdict::Unsat => record.verdict = Some(Verdict::Unsat),
        SolverVerdict::Unknown(reason) => {
            let r = reason.to_ascii_lowercase();
            record.failure = Some(if r.contains("timeout") || r.contains("canceled") {
                FailureKind::Timeout
            } else {
                FailureKind::Unsupported
            });
            record.detail = format!("unknown: {reason}");
        }
        SolverVerdict::Sat(model) => {
            record.verdict = Some(Verdict::Sat);
            if config.verify || config.decode {
                match decode_solution(&model, &problem) {
                    Ok(decoded) => {
                        if config.verify {
                            match verify_solution(&problem, &decoded) {
                                Ok(Verification::Pass) => record.verified = Some(true),
                                Ok(Verification::Fail(v)) => {
                                    record.verdict = None;
                                    record.failure = Some(FailureKind::InvalidModel);
                                    record.verified = Some(false);
                                    record.detail = v.to_string();
                                }
                                Err(e) => {
                                    record.verdict = None;
                                    record.failure = Some(FailureKind::InvalidModel);
                                    record.verified = Some(false);
                                    record.detail = format!("verification failed: {e}");
                                }
                            }
                        }
                        tables = Some(decoded);
                    }
                    Err(e @ InferError::Unbounded(_)) => {
                        record.detail = format!("not decoded: {e}");
                    }
                    Err(e) => {
                        record.verdict = None;
                        record.failure = Some(FailureKind::InvalidModel);
                        record.detail = format!("decoding failed: {e}");
                    }
                }
            }
        }
    }
    finish(record, tables, script)
}

/// Problem files (`*.problem` or `*.toml`) directly inside `dir`, sorted.
pub fn instance_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("problem" | "toml")
                )
        })
        .collect();
    files.sort();
    Ok(files)
}

fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Runs every (instance, strategy) pair on at most `parallelism` workers,
/// each job with its own solver process. Records come back in instance order,
/// then strategy order. A file that cannot be read or parsed gives a failed
/// record and the batch carries on.
pub fn run_batch(
    files: &[PathBuf],
    strategies: &[Strategy],
    parallelism: usize,
    base: &RunConfig,
) -> Vec<RunRecord> {
    let jobs: Vec<(usize, usize)> = (0..files.len())
        .flat_map(|i| (0..strategies.len()).map(move |s| (i, s)))
        .collect();
    let next = AtomicUsize::new(0);
    let sink: Mutex<Vec<(usize, RunRecord)>> = Mutex::new(Vec::with_capacity(jobs.len()));
    let workers = parallelism.clamp(1, jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, s)) = jobs.get(k) else { break };
                let config = RunConfig {
                    strategy: strategies[s],
                    decode: false,
                    emit_script: false,
                    ..base.clone()
                };
                let record = run_file(&files[i], &config);
                sink.lock().unwrap().push((k, record));
            });
        }
    });
    let mut records = sink.into_inner().unwrap();
    records.sort_by_key(|(k, _)| *k);
    records.into_iter().map(|(_, r)| r).collect()
}

fn run_file(path: &Path, config: &RunConfig) -> RunRecord {
    let id = instance_id(path);
    let start = Instant::now();
    let failed = |detail: String| RunRecord {
        instance: id.clone(),
        strategy: config.strategy.name().to_string(),
        verdict: None,
        failure: Some(FailureKind::Unsupported),
        time_ms: start.elapsed().as_secs_f64() * 1e3,
        lemma_count: 0,
        check_sat_calls: 0,
        verified: None,
        detail,
    };
    match std::fs::read_to_string(path) {
        Err(e) => failed(format!("cannot read {}: {e}", path.display())),
        Ok(text) => match run_single(&id, &text, config) {
            Ok(out) => out.record,
            Err(e) => failed(format!("parse: {e}")),
        },
    }
}

/// One step of a cumulative solved-count curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulativeRow {
    pub strategy: String,
    pub time_ms: f64,
    pub solved_count: usize,
}

/// Per strategy (in `strategies` order): a `(0, 0)` start, then one row per
/// solved record sorted by time, counting up to the number solved.
pub fn cumulative(records: &[RunRecord], strategies: &[Strategy]) -> Vec<CumulativeRow> {
    let mut rows = Vec::new();
    for s in strategies {
        let mut times: Vec<f64> = records
            .iter()
            .filter(|r| r.strategy == s.name() && r.solved())
            .map(|r| r.time_ms)
            .collect();
        times.sort_by(f64::total_cmp);
        rows.push(CumulativeRow {
            strategy: s.name().to_string(),
            time_ms: 0.0,
            solved_count: 0,
        });
        rows.extend(times.into_iter().enumerate().map(|(i, t)| CumulativeRow {
            strategy: s.name().to_string(),
            time_ms: t,
            solved_count: i + 1,
        }));
    }
    rows
}

/// Solved count of `strategy` among runs that finished within `time_ms`.
pub fn solved_by(rows: &[CumulativeRow], strategy: &str, time_ms: f64) -> usize {
    rows.iter()
        .filter(|r| r.strategy == strategy && r.time_ms <= time_ms)
        .map(|r| r.solved_count)
        .max()
        .unwrap_or(0)
}

pub fn write_csv<T: Serialize>(out: impl io::Write, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
