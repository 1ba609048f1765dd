use thiserror::Error;

/// Failures while constructing or parsing a [`Network`](crate::Network).
///
/// Parse-time variants carry the 1-based line number of the offending record.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: vertex '{label}' declared twice")]
    DuplicateVertex { line: usize, label: String },
    #[error("line {line}: unknown vertex '{label}'")]
    UnknownVertex { line: usize, label: String },
    #[error("line {line}: self-loop at vertex '{label}'")]
    SelfLoop { line: usize, label: String },
    #[error("line {line}: edge {a}-{b} has invalid weight {weight} (must be finite and > 0)")]
    InvalidWeight {
        line: usize,
        a: String,
        b: String,
        weight: f64,
    },
    #[error("line {line}: duplicate edge {a}-{b} with conflicting weights {first} and {second}")]
    ConflictingEdge {
        line: usize,
        a: String,
        b: String,
        first: f64,
        second: f64,
    },
    #[error("empty interior: no vertex is declared interior")]
    EmptyInterior,
    #[error("empty boundary: at least one boundary vertex is required")]
    EmptyBoundary,
    #[error("disconnected network: vertex '{label}' is unreachable from '{root}'")]
    Disconnected { label: String, root: String },
    #[error("boundary vertex '{label}' has no interior neighbour")]
    DetachedBoundary { label: String },
    #[error("weights are not symmetric at ('{a}', '{b}')")]
    Asymmetric { a: String, b: String },
    #[error("nonzero self-weight at vertex '{label}'")]
    Loop { label: String },
    #[error("invalid weight {weight} at ('{a}', '{b}')")]
    BadEntry { a: String, b: String, weight: f64 },
    #[error("vertex index {index} out of range for a network of {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("size too small: {0}")]
    TooSmall(String),
}

/// Numerical and contract errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("field has {found} entries, network has {expected} vertices")]
    SizeMismatch { expected: usize, found: usize },
    #[error("field is identically zero")]
    ZeroField,
    #[error("field is nonzero ({value}) on boundary vertex {vertex}")]
    NotAdmissible { vertex: usize, value: f64 },
    #[error("field is negative ({value}) at vertex {vertex}")]
    NegativeData { vertex: usize, value: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("first eigenvector is not positive on the interior (vertex {vertex}: {value}); the interior may be disconnected by the boundary")]
    NonPositiveEigenvector { vertex: usize, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid nonlinearity: {0}")]
    InvalidNonlinearity(String),
    #[error("f vanishes or is negative at u = {u} on the integration ray")]
    VanishingNonlinearity { u: f64 },
    #[error("J(0) = {j0} is not positive; no blow-up bound exists")]
    NonPositiveEnergy { j0: f64 },
    #[error("requested t0 = {requested} exceeds the contraction window {max} (C1 = {c1})")]
    WindowTooLarge { requested: f64, max: f64, c1: f64 },
    #[error("Picard iteration did not reach tolerance within {iterations} iterations (last change {change})")]
    PicardCap { iterations: usize, change: f64 },
    #[error("initial data are not ordered: u0 < v0 at vertex {vertex}")]
    Unordered { vertex: usize },
    #[error("time series is empty")]
    EmptySeries,
    #[error("trajectory slice: {0}")]
    BadSlice(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
