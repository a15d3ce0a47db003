use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by graph construction, model assembly, solvers and the
/// experiment layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size too small: {0}")]
    SizeTooSmall(String),

    #[error("graph is disconnected ({reached} of {total} nodes reachable from node 0)")]
    DisconnectedGraph { reached: usize, total: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("node {node} out of range for graph with {num_nodes} nodes")]
    NodeOutOfRange { node: usize, num_nodes: usize },

    #[error("need at least {needed} points for a fit, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("invalid fit input: {0}")]
    InvalidFit(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix dimension is zero")]
    DimensionZero,

    #[error("dimension {dim} exceeds dense solver limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error(
        "eigensolver did not converge after {iterations} iterations (residual {residual:.3e}, energy {energy})"
    )]
    NoConvergence {
        energy: f64,
        residual: f64,
        iterations: usize,
        /// Best iterate found before giving up.
        amplitudes: Vec<f64>,
    },

    #[error("ground state is not sign-definite: minimum amplitude {0:.3e}")]
    SignIndefinite(f64),

    #[error("lowest eigenvalue is degenerate (gap {0:.3e})")]
    Degenerate(f64),

    #[error("configuration space is reducible: {reached} of {total} basis states connected")]
    ReducibleBasis { reached: usize, total: usize },

    #[error("unsupported number of pairs {0}, expected 1, 2 or 3")]
    UnsupportedPairs(usize),

    #[error("graph with {sites} sites cannot host {pairs} pairs")]
    TooFewSites { sites: usize, pairs: usize },

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("normalization factor chi_{n} = {value:.3e} vanishes")]
    VanishingChi { n: usize, value: f64 },

    #[error("vector has negative amplitude {0:.3e}; expected Perron gauge")]
    NegativeAmplitude(f64),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
