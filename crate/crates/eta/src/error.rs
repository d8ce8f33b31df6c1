use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("row {row}, column `{column}`: cannot parse `{value}` as a finite number")]
    UnparsableValue {
        row: usize,
        column: String,
        value: String,
    },
    #[error("key `{0}` appears more than once")]
    DuplicateKey(String),
    #[error("no key has values in every selected column")]
    EmptyIntersection,
    #[error("price at position {index} is not positive")]
    NonPositivePrice { index: usize },
    #[error("series of length {len} is too short for {need} observations")]
    SeriesTooShort { len: usize, need: usize },
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("invalid model `{0}` (expected nelsen:THETA, khoudraji:ALPHA,BETA,DELTA, gumbel:DELTA or max:M)")]
    ModelSpec(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] eta_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 3 for numerical failures, 2 for everything the
    /// caller can fix by changing the input.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}
