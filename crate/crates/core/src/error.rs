use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// The displacement lies behind the panel, outside the (0, pi] azimuth domain.
    #[error("target lies behind the panel (azimuth {azimuth:.6} rad outside (0, pi])")]
    BehindPanel { azimuth: f64 },

    #[error("invalid path set: {0}")]
    InvalidPathSet(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    Dimension {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("cannot partition {elements} elements into {k} sub-arrays: {reason}")]
    Partition {
        elements: usize,
        k: usize,
        reason: String,
    },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("degenerate SNR: signal has zero power at finite SNR {snr_db} dB")]
    DegenerateSnr { snr_db: f64 },

    #[error("problem size {n} exceeds enumeration guard {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("no active elements to reconstruct from")]
    NoActiveElements,

    #[error("degenerate normalization: all true positions are identical")]
    DegenerateNormalization,

    #[error("invalid manifest: {0}")]
    InvalidManifest(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("format version mismatch: file has {found}, this build reads {expected}")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("truncated file: expected {expected} bytes, found {found}")]
    Truncated { expected: u64, found: u64 },

    #[error("checksum failure: {0}")]
    Checksum(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error("schema violation at {location}: {reason}")]
    Schema { location: String, reason: String },

    #[error("provenance mismatch: results reference dataset {found}, expected {expected}")]
    Provenance { expected: String, found: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn dim(expected: usize, got: usize, context: &'static str) -> Self {
        Error::Dimension {
            expected,
            got,
            context,
        }
    }
}
