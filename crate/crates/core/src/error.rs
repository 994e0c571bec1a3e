//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must share a degree do not.
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    /// Malformed textual input (cycle notation, partition or scheme strings).
    #[error("parse error: {0}")]
    Parse(String),

    /// The brute-force oracle refuses degrees above its combinatorial budget.
    #[error("oracle budget exceeded: brute-force mass supports degree <= {max}, got {degree}")]
    OracleBudget { degree: usize, max: usize },

    /// Enumeration would exceed a configured resource limit. Never silently
    /// truncated: the offending scheme is named.
    #[error("resource budget exceeded for scheme {scheme}: {reason}")]
    Budget { scheme: String, reason: String },

    /// Dessins are defined for connected coverings only.
    #[error("covering class is disconnected; dessins require a connected covering")]
    Disconnected,

    /// Filesystem failure while reading or writing a cache or result file.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A result or cache file exists but is not in a format we can use.
    #[error("bad file {path}: {reason}")]
    BadFile { path: PathBuf, reason: String },

    /// A consistency suite found a contradiction between independent routes;
    /// this indicates a defect, never bad user input.
    #[error("verification failed for scheme {scheme}: {detail}")]
    Verification { scheme: String, detail: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
