use std::path::PathBuf;

use crate::report::VerificationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument outside the operation's domain (e.g. order below 3).
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition of the operation was not met.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A universal-cycle window repeats a point.
    #[error("window {index} repeats a point")]
    MalformedWindow { index: usize },

    /// No alternating choice of join colors exists for a block order.
    #[error("no alternating join assignment; adjacency {adjacency} cannot be satisfied")]
    NoJoinAssignment { adjacency: usize },

    /// Cycle assembly stalled; `components` partitions the input cycles by
    /// shared join colors.
    #[error("cycle assembly stuck with {} color-disjoint components", components.len())]
    AssemblyStuck { components: Vec<Vec<usize>> },

    /// A constructed object failed its own verification.
    #[error("construction of {what} failed verification: {report}")]
    Unverified {
        what: String,
        report: Box<VerificationReport>,
    },

    #[error("infeasible request {request}: {reason}")]
    Infeasible { request: String, reason: String },

    #[error("search budget exhausted: {0}")]
    Exhausted(String),

    #[error("not available: {0}")]
    NotAvailable(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("i/o error on {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
