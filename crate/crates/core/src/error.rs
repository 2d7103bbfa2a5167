use thiserror::Error;

/// Errors produced by the cooling library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoolingError {
    #[error("{name} = {value} is outside its domain: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("{what} needs {requested} qubits but at most {limit} are supported")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitMismatch { expected: usize, found: usize },
}

impl CoolingError {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        CoolingError::Domain {
            name,
            value,
            expected,
        }
    }

    pub(crate) fn capacity(what: &'static str, requested: usize, limit: usize) -> Self {
        CoolingError::Capacity {
            what,
            requested,
            limit,
        }
    }

    /// True for errors caused by a request exceeding a size limit.
    pub fn is_capacity(&self) -> bool {
        matches!(self, CoolingError::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, CoolingError>;
