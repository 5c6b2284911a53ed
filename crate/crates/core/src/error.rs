use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
///
/// Checks that produce a verdict (symmetry reports, admissibility, Jordan-IP
/// constancy) never return an error for a negative answer; they report it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("signature ({p},{q}) has dimension {} < 2", p + q)]
    DimensionTooSmall { p: usize, q: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("map is not {kind}: entry ({row},{col}) deviates by {deviation:e}")]
    AdjointnessViolated {
        kind: &'static str,
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("tensors live over different spaces: ({0},{1}) vs ({2},{3})")]
    SpaceMismatch(usize, usize, usize, usize),

    #[error("cannot combine an empty list of tensors")]
    EmptyCombination,

    #[error("signature ({p},{q}) admits no {what}: {reason}")]
    UnsupportedSignature {
        p: usize,
        q: usize,
        what: &'static str,
        reason: &'static str,
    },

    #[error("invalid complex structure: {0}")]
    InvalidComplexStructure(String),

    #[error("invalid quaternion structure: {0}")]
    InvalidQuaternionStructure(String),

    #[error("degenerate plane: |det G2| = {det:e} not above threshold {threshold:e}")]
    DegeneratePlane { det: f64, threshold: f64 },

    #[error("null vector: |(x,x)| = {0:e} is below tolerance")]
    NullVector(f64),

    #[error("plane is not a complex line for the given structure (residual {0:e})")]
    NotComplexLine(f64),

    #[error("{causal} planes are not realizable in signature ({p},{q})")]
    UnrealizableCausalType {
        causal: &'static str,
        p: usize,
        q: usize,
    },

    #[error("rejection sampling exhausted {draws} draws while collecting {wanted} planes")]
    SamplingBudgetExceeded { draws: usize, wanted: usize },

    #[error("sample count must be at least 1")]
    EmptySample,

    #[error("eigenvalue computation did not converge")]
    EigenSolverFailed,

    #[error("structural error in spectrum of J R(pi): {0}")]
    Structural(String),

    #[error("spectrum shape not realizable by the {model} model: {reason}")]
    UnrealizableSpectrum { model: &'static str, reason: String },

    #[error("map is not admissible: {0}")]
    NotAdmissible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
