use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pairing matrix is singular or not unimodular; ring reduction rules are inconsistent")]
    SingularPairing,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported level: Φ(i={i}, j={j}) is not available (supported: i=0 any j; i=1, j≤1; i=2, j=0)")]
    UnsupportedLevel { i: u32, j: u32 },

    #[error("unreachable by reconstruction: {0}")]
    Unreachable(String),

    #[error("non-integral {what}: {value}")]
    NonIntegral { what: String, value: String },

    #[error(
        "oracle mismatch for N_{d}({r},{s},{theta}): engine {engine}, Schubert oracle {oracle}"
    )]
    OracleMismatch {
        d: u32,
        r: u32,
        s: u32,
        theta: u32,
        engine: String,
        oracle: String,
    },

    #[error("provider mismatch for N_{d}({r},{s},{theta}): table {table}, engine {engine}")]
    ProviderMismatch {
        d: u32,
        r: u32,
        s: u32,
        theta: u32,
        table: String,
        engine: String,
    },

    #[error("base number N_{d}({r},{s},{theta}) is missing from the imported table")]
    MissingFromTable { d: u32, r: u32, s: u32, theta: u32 },

    #[error("cache version mismatch: expected header {expected:?}, found {found:?}")]
    VersionMismatch { expected: String, found: String },

    #[error("cache fingerprint mismatch: expected {expected}, found {found}")]
    FingerprintMismatch { expected: String, found: String },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate key with conflicting values: {key} = {first} vs {second}")]
    DuplicateKey {
        key: String,
        first: String,
        second: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Errors caused by caller input rather than by an engine or data inconsistency.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch(_)
                | Error::InvalidArgument(_)
                | Error::UnsupportedLevel { .. }
        )
    }
}
