use thiserror::Error;

/// Errors produced by code construction, parsing, estimation and decoding.
#[derive(Error, Debug)]
pub enum Error {
    /// A caller-supplied parameter violates a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Malformed alist or config text; carries the 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The curve fit did not reach an acceptable residual.
    #[error("fit did not converge: {msg} (rms log residual {residual:.3e})")]
    FitDiverged { msg: String, residual: f64 },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
