use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("excitation number {k} out of range for {n} qubits")]
    ExcitationOutOfRange { n: usize, k: usize },

    #[error("Pauli counts {counts:?} do not sum to {n} qubits")]
    CountsMismatch { counts: [usize; 4], n: usize },

    #[error("{op} requires at least {min} qubits, got {n}")]
    TooFewQubits {
        op: &'static str,
        min: usize,
        n: usize,
    },

    #[error("{op} requires exactly {expected} qubits, got {n}")]
    WrongQubitNumber {
        op: &'static str,
        expected: usize,
        n: usize,
    },

    #[error("{op} requires an odd number of qubits, got {n}")]
    EvenQubitNumber { op: &'static str, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("tensor coordinate {counts:?} has imaginary part {imag:e}")]
    ImaginaryCoordinate { counts: [usize; 4], imag: f64 },

    #[error("contraction identity violated by {0:e}")]
    ContractionViolated(f64),

    #[error("trace normalization violated: x_0…0 = {0}")]
    Normalization(f64),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace {0} differs from 1")]
    Trace(f64),

    #[error("state is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("state has N-partite correlations (max violation {0:e})")]
    NotSnc(f64),

    #[error("eigenvalue cluster at {value} has odd dimension {dim}")]
    OddCluster { value: f64, dim: usize },

    #[error("expected a rank-2 state, found rank {0}")]
    Rank(usize),

    #[error("zero state vector")]
    ZeroVector,

    #[error("trace of A is {0}, expected 1")]
    TraceA(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed state file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for malformed input, as opposed to well-formed but invalid states.
    pub fn is_format(&self) -> bool {
        matches!(self, Error::Format(_) | Error::Json(_))
    }
}
