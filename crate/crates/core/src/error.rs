use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid Pauli index: {0}")]
    InvalidIndex(String),

    #[error("matrix is not Hermitian (imaginary residue {residue:.3e})")]
    NotHermitian { residue: f64 },

    #[error("state is not normalized: P_0 = {p0}")]
    Normalization { p0: f64 },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error(
        "Kraus set is trace-increasing (largest eigenvalue of sum A^dag A is {max_eigenvalue})"
    )]
    TraceIncreasing { max_eigenvalue: f64 },

    #[error("invalid projector: {0}")]
    InvalidProjector(String),

    #[error("gate is not trace-preserving (row 0 deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("trace-decreasing gate passed to a linear application; use apply_nonlinear")]
    TraceDecreasingGate,

    #[error("outcome has zero probability (p = {probability:.3e})")]
    ZeroProbability { probability: f64 },

    #[error("gate is not square ({n_out} x {n_in} ququats)")]
    NotSquare { n_in: usize, n_out: usize },

    #[error("matrix is not orthogonal (deviation {deviation:.3e})")]
    NotOrthogonal { deviation: f64 },

    #[error("gate does not come from a single-qubit unitary: {0}")]
    NotRotation(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("projector is zero")]
    ZeroProjector,

    #[error("superoperator is not idempotent (deviation {deviation:.3e})")]
    NotIdempotent { deviation: f64 },

    #[error("table is already realizable by a unital gate; use synthesize_quantum")]
    AlreadyUnitalRealizable,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema { .. } | Error::UnknownName(_) | Error::DimensionMismatch(_) => 2,
            Error::ZeroProbability { .. } => 4,
            _ => 3,
        }
    }
}
