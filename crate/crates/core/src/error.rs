use thiserror::Error;

/// Everything that can go wrong while building, analysing or evolving a walk.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(u64),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(u64, u64),

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("unknown vertex {0}")]
    UnknownVertex(u64),

    #[error("marked set is empty")]
    EmptyMarked,

    #[error("every vertex is marked")]
    AllMarked,

    #[error("marked set does not induce a connected subgraph")]
    DisconnectedMarked,

    #[error("amplitude vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("custom amplitudes violate the balance constraint (defect {defect:e})")]
    Unbalanced { defect: f64 },

    #[error("no nonzero balanced component amplitudes exist")]
    NoBalancedAmplitudes,

    #[error("shortages cannot be neutralised (residual {residual:e})")]
    Infeasible { residual: f64 },

    #[error("state vector is zero")]
    ZeroState,

    #[error("norm drifted by {drift:e} at step {step}")]
    NormDrift { step: usize, drift: f64 },

    #[error("dense operator limited to {limit} vertices, graph has {n}")]
    TooLargeForDense { n: usize, limit: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
