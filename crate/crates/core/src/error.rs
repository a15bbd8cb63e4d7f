use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty Pauli string")]
    EmptyPauli,

    #[error("invalid Pauli letter {found:?} at position {position}")]
    InvalidPauliLetter { position: usize, found: char },

    #[error("operator length mismatch: expected {expected} qubits, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("CNOT control and target must differ (both {0})")]
    SameControlTarget(usize),

    #[error("column {index} out of range for table with {len} columns")]
    ColumnOutOfRange { index: usize, len: usize },

    #[error("rotation {0} has support size 0")]
    IdentityRotation(usize),

    #[error("expected {expected} angles, got {found}")]
    AngleCountMismatch { expected: usize, found: usize },

    #[error("{what} of size {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("non-Clifford gate at position {0} in network")]
    NonCliffordGate(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
