use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TnnError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("arity {n} exceeds the supported bound of {max}")]
    ArityTooLarge { n: usize, max: usize },

    #[error("value {value} does not fit in {bits} bits")]
    WordOutOfRange { value: usize, bits: usize },

    #[error("basis index {index} out of range for {n_qubits} qubits")]
    BasisIndexOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("identical endpoints {0} for a transposition")]
    DegenerateTransposition(usize),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, TnnError>;
