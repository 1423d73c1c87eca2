//! Error type shared across the crate.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors emitted by encoding construction, the encoder, and diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Operand shapes are incompatible for the requested operation.
    Dimension { op: &'static str, detail: String },
    /// A configuration value is out of range or inconsistent. `field` names
    /// the offending key.
    Config { field: &'static str, detail: String },
    /// The finite-difference oracle hit a non-finite function evaluation.
    Oracle { detail: String },
    /// Training produced a non-finite loss.
    Diverged { epoch: usize, batch: usize },
    /// The operation is not defined for this scheme (e.g. decay curves for
    /// bias-only schemes, which have no encoding vectors).
    UnsupportedScheme { scheme: &'static str, op: &'static str },
    /// A forward cache does not match the parameters it is replayed against.
    Usage { detail: String },
    /// File or serialization failure, with the path involved.
    Io { path: String, detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { op, detail } => write!(f, "dimension error in {op}: {detail}"),
            Error::Config { field, detail } => write!(f, "config error: {field}: {detail}"),
            Error::Oracle { detail } => write!(f, "oracle error: {detail}"),
            Error::Diverged { epoch, batch } => {
                write!(f, "training diverged (non-finite loss) at epoch {epoch}, batch {batch}")
            }
            Error::UnsupportedScheme { scheme, op } => {
                write!(f, "scheme `{scheme}` is not supported by {op}")
            }
            Error::Usage { detail } => write!(f, "usage error: {detail}"),
            Error::Io { path, detail } => write!(f, "io error for {path}: {detail}"),
        }
    }
}

impl std::error::Error for Error {}

impl Error {
    pub fn dimension(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Dimension { op, detail: detail.into() }
    }

    pub fn config(field: &'static str, detail: impl Into<String>) -> Self {
        Error::Config { field, detail: detail.into() }
    }
}
