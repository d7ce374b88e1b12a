use thiserror::Error;

/// Errors produced by the decomposition engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PidError {
    /// The number of sources exceeds what can be enumerated.
    #[error(
        "n = {n} is outside the supported range 1..={max}: the lattice has Dedekind(n) - 2 nodes \
         and Dedekind numbers grow doubly exponentially (set PID_MAX_N=6 to unlock n = 6)"
    )]
    Capacity { n: usize, max: usize },

    /// Caller supplied inconsistent arguments (mismatched source counts, bad indices, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A collection list that is not an antichain.
    #[error("not an antichain: {{{}}} is contained in {{{}}}", .subset, .superset)]
    NotAntichain { subset: String, superset: String },

    /// Malformed input text.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The probability table violates a distribution invariant.
    #[error("invalid distribution: {0}")]
    Distribution(String),

    /// A conditional quantity was requested on a zero-probability event.
    #[error("domain error: {0}")]
    Domain(String),

    /// Unknown measure or criterion name.
    #[error("unknown measure `{0}` (expected one of sx, res, ws, ms, unq, syn)")]
    UnknownMeasure(String),

    /// Invariant violation that should be unreachable.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = PidError> = std::result::Result<T, E>;

impl PidError {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        PidError::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
