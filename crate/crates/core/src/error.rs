use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input arity mismatch: expected {expected} bits, got {got}")]
    InputArity { expected: usize, got: usize },
    #[error("output arity mismatch: {lhs} vs {rhs} outputs")]
    OutputArity { lhs: usize, rhs: usize },
    #[error("{inputs} inputs exceed the exhaustive limit of {limit}")]
    Capacity { inputs: usize, limit: usize },
    #[error("invalid truth table: {0}")]
    InvalidSpec(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid ripple width {0}")]
    InvalidWidth(usize),
    #[error("operand out of range: {0}")]
    OutOfRange(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("unknown cell label `{0}`")]
    UnknownLabel(String),
    #[error("simulation error: {0}")]
    Simulation(String),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("fault sweep aborted: {0}")]
    FaultSweep(String),
    #[error("unknown {0}")]
    UnknownName(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
