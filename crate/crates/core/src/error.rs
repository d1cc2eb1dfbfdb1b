use thiserror::Error;

/// Errors raised across graph construction, simulation, descent and sweeps.
#[derive(Debug, Error)]
pub enum Error {
    #[error("a graph needs at least one vertex")]
    EmptyGraph,

    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("edge ({0}, {1}) is not valid on {2} vertices")]
    InvalidEdge(usize, usize, usize),

    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(usize, usize),

    #[error("bitstring has {got} bits but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{n} qubits exceeds the state-vector cap of {cap} (2^{n} amplitudes)")]
    TooManyQubits { n: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter vector: {0}")]
    InvalidParams(String),

    #[error("approximation ratio is undefined for a graph with no edges")]
    ZeroOptimum,

    #[error("objective or gradient is not finite at {point:?}")]
    NonFinite { point: Vec<f64> },

    #[error("every basin probe failed: {0}")]
    NoBasins(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
