// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::path::PathBuf;

/// Where in an input file a problem was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Locus {
    pub file: String,
    pub line: Option<u64>,
}

impl Locus {
    pub fn new(file: impl Into<String>, line: Option<u64>) -> Self {
        Self {
            file: file.into(),
            line,
        }
    }
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}, line {}", self.file, line),
            None => write!(f, "{}", self.file),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("schema error in {locus}: {message}")]
    Schema { locus: Locus, message: String },

    #[error("invalid value in {locus}: {message}")]
    Value { locus: Locus, message: String },

    #[error("duplicate ticker `{ticker}` in {locus}")]
    DuplicateTicker { ticker: String, locus: Locus },

    #[error("chain distribution has no entries")]
    EmptyDistribution,

    #[error("chain distribution weights are all zero")]
    AllZeroWeights,

    #[error("asset `{0}` has zero asset value; turnover is undefined")]
    ZeroAssetValue(String),

    #[error("normalization reference set is empty")]
    EmptyReferenceSet,

    #[error("metric `{0}` is not part of the normalization context")]
    UnknownMetric(String),

    #[error("invalid weight scheme `{name}`: {reason}")]
    InvalidWeights { name: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for failures of the filesystem rather than of the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::FileNotFound(_) | Error::Io { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
