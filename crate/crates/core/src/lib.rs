//! Satisfiability modulo theories with uninterpreted functions constrained
//! to be monotone in selected arguments, and inference of monotone update
//! functions of discrete regulatory networks from observed fixed points.

pub mod encode;
pub mod generate;
pub mod infer;
pub mod model;
pub mod oracle;
pub mod problem_file;
pub mod skolem;
pub mod smt;
pub mod spec;
pub mod term;

pub use encode::{
    encode, encode_eager, encode_quant_aggregated, encode_quant_individual, monotonize_model,
    solve_lazy, EncodeError, EncodeOptions, EncodedProblem, Lemma, MonotoneModel, Strategy,
};
pub use model::{EvalError, FunctionTable, Model, Valuation, Value};
pub use smt::{SolverCommand, SolverError, SolverSession, SolverVerdict};
pub use spec::{ArgSpec, Direction, MonotonicitySpec, SpecError};
pub use term::{ArgVector, Binder, CmpOp, FunctionSymbol, Name, Sort, SortKind, Term, TermError};
