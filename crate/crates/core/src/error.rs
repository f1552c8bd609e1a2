use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed image: {0}")]
    Parse(String),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("empty sequence: {0}")]
    EmptySequence(String),

    #[error("truncated stream: {len} bytes is not a multiple of the {frame_len}-byte frame size")]
    TruncatedStream { len: u64, frame_len: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("geometry mismatch: expected {expected_w}x{expected_h}, got {got_w}x{got_h}")]
    Shape {
        expected_w: usize,
        expected_h: usize,
        got_w: usize,
        got_h: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("component {id} not found (labels hold {count} components)")]
    NotFound { id: u32, count: u32 },

    #[error("degenerate blob: {0}")]
    DegenerateBlob(&'static str),

    #[error("frame index {got} does not follow {last}")]
    Order { last: u64, got: u64 },

    #[error("accuracy undefined: count {count} against a true count of zero")]
    UndefinedAccuracy { count: u64 },

    #[error("schema mismatch: {0}")]
    Schema(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn shape(expected: (usize, usize), got: (usize, usize)) -> Self {
        Error::Shape {
            expected_w: expected.0,
            expected_h: expected.1,
            got_w: got.0,
            got_h: got.1,
        }
    }

    /// Process exit code used by the command-line front end: 1 for input
    /// and I/O failures, 2 for configuration and validation failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Parse(_)
            | Error::UnsupportedFormat(_)
            | Error::EmptySequence(_)
            | Error::TruncatedStream { .. } => 1,
            Error::Config(_)
            | Error::Shape { .. }
            | Error::Precondition(_)
            | Error::NotFound { .. }
            | Error::DegenerateBlob(_)
            | Error::Order { .. }
            | Error::UndefinedAccuracy { .. }
            | Error::Schema(_) => 2,
        }
    }
}
