use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error in {family}: {detail}")]
    Range { family: String, detail: String },

    /// Malformed call: empty samples, mismatched grids, bad names.
    #[error("usage error: {0}")]
    Usage(String),

    /// The log-derivative diverged, i.e. the even solution has a zero.
    #[error("singular profile: |u| exceeded {limit:e} at x = {x}")]
    SingularProfile { x: f64, limit: f64 },

    /// s = 0 (g = 1): the Riccati equation degenerates.
    #[error("degenerate coupling: s = 0 (g = 1) admits no dual pair")]
    DegenerateCoupling,

    #[error("series did not converge after {terms} terms")]
    Convergence { terms: usize },

    /// The inverse-square family sampled on its pole.
    #[error("singular potential: sample x = {x} sits on the pole x = -a")]
    Singularity { x: f64 },

    /// Non-finite or otherwise invalid numeric input.
    #[error("input error: {0}")]
    Input(String),

    /// Some invariant check did not meet its tolerance.
    #[error("verification failed: {failed} row(s) out of tolerance")]
    Verification { failed: usize },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for failed verification, 2 for mathematical or
    /// domain failures, 3 for IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification { .. } => 1,
            Error::Io { .. } | Error::Csv(_) | Error::Json(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
