use thiserror::Error;

/// Errors raised across the teaching pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input has {got} bits, concept expects {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invalid concept: {0}")]
    InvalidConcept(String),

    #[error("concept has {nodes} nodes, exceeding the size bound {bound}")]
    SizeBound { nodes: usize, bound: usize },

    #[error("string of length {len} is longer than the automaton bound {n}")]
    StringTooLong { len: usize, n: usize },

    #[error("malformed automaton: input exhausted at state {state} after {read} bits")]
    Exhausted { state: usize, read: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient data in round {round}: {have} examples, {need} required")]
    InsufficientData { round: usize, have: usize, need: usize },

    #[error("metric undefined on an empty sample")]
    EmptySample,

    #[error("enumeration over n = {n} inputs exceeds the cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
