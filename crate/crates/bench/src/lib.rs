//! File formats, built-in examples, error tables and the invariant suite
//! around the `rkbvp` solver.

pub mod examples;
pub mod grid;
pub mod kernel_dump;
pub mod problem_file;
pub mod quadrature;
pub mod run;
pub mod table;
pub mod verify;

use std::path::PathBuf;

use rkbvp::{ExprError, KernelError, ProblemError, SolveError};
use thiserror::Error;

pub use examples::{builtin_example, ExampleId};
pub use grid::Grid;
pub use problem_file::{load_problem, parse_problem};
pub use run::{run, run_spec, ProblemSource, RunConfig};
pub use table::{emit, ErrorTable, OutputFormat, Row, RunMetadata};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("unknown key `{key}` on line {line}")]
    UnknownKey { key: String, line: usize },
    #[error("key `{key}` given twice (line {line})")]
    DuplicateKey { key: String, line: usize },
    #[error("key `{key}` expects {expected} values, got {got}")]
    ValueCount { key: &'static str, expected: usize, got: usize },
    #[error("key `{key}`: {source}")]
    Expression {
        key: String,
        #[source]
        source: ExprError,
    },
    #[error("key `{key}` must be a constant, found a reference to x or u")]
    NotConstant { key: &'static str },
    #[error("unknown example `{0}` (expected 4.1, 4.2, 4.3 or 4.4)")]
    UnknownExample(String),
    #[error("invalid grid `{spec}`: {msg}")]
    Grid { spec: String, msg: String },
    #[error("grid point {x} lies outside [{a}, {b}]")]
    GridOutsideInterval { x: f64, a: f64, b: f64 },
    #[error("need at least 6 nodes, got {0}")]
    TooFewNodes(usize),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("kernel construction failed: {0}")]
    Kernel(#[from] KernelError),
    #[error("solver failed: {0}")]
    Solve(#[from] SolveError),
}

impl BenchError {
    /// Process exit code: 1 for numerical failures, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Kernel(_) | BenchError::Solve(_) | BenchError::Problem(ProblemError::Eval { .. }) => 1,
            _ => 2,
        }
    }
}
