use thiserror::Error;

/// Errors produced by the library.
///
/// The variants split into two families that the command-line front end maps
/// onto distinct exit codes: validation failures (bad input, mismatched
/// dimensions, out-of-range parameters) and capability failures (a request
/// that is well formed but exceeds a brute-force guard or has no closed form).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} candidates, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid vote: {0}")]
    InvalidVote(String),

    #[error("invalid election: {0}")]
    InvalidElection(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("capability exceeded: {0}")]
    Capability(String),
}

impl Error {
    /// True for errors raised by a size guard or a missing closed form.
    pub fn is_capability(&self) -> bool {
        matches!(self, Error::Capability(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
