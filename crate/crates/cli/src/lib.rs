//! Problem-file driven solving, instance generation and batch benchmarking
//! on top of `monouf`.

pub mod harness;

pub use harness::{
    cumulative, instance_files, run_batch, run_single, solved_by, write_csv, CumulativeRow,
    FailureKind, RunConfig, RunOutput, RunRecord, Verdict, DEFAULT_PARALLELISM, DEFAULT_TIME_LIMIT,
};
