//! Error type shared by every module of the engine.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis label `{label}` does not match register width {n_qubits}")]
    InvalidLabel { label: String, n_qubits: usize },

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("{n_qubits} qubits exceed the {max}-qubit cap for {what}")]
    CapacityExceeded {
        n_qubits: usize,
        max: usize,
        what: &'static str,
    },

    #[error("register must hold at least one qubit")]
    InvalidSize,

    #[error("operand dimensions disagree: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("size {n_qubits} unsupported for {what} (supported: {supported})")]
    UnsupportedSize {
        n_qubits: usize,
        what: &'static str,
        supported: &'static str,
    },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositiveSemidefinite { min_eig: f64 },

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("cannot compare against an all-zero matrix")]
    ZeroMatrix,

    #[error("state vector norm {norm} is not 1 within tolerance")]
    NotNormalized { norm: f64 },

    #[error("mode `{mode}` is not valid here: {why}")]
    InvalidMode { mode: &'static str, why: &'static str },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config key `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            msg: msg.into(),
        }
    }
}
