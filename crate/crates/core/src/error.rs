use thiserror::Error;

/// Errors raised by group construction, groupoid operations and the linear algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A Cayley table or permutation list failed validation.
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    /// A named group was unknown or its parameter out of range.
    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    /// A generated object would exceed a configured bound.
    #[error("size limit exceeded: {what} needs {requested}, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    /// Two 1-maps or 2-cells were not composable.
    #[error("cannot compose {left} with {right}")]
    Composition { left: String, right: String },

    /// A quiver or relation list failed validation.
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    /// A vector supplied as a character violates the additivity constraints.
    #[error("not a character: {0}")]
    NotACharacter(String),

    /// A raw coefficient family violates the Leibniz rule.
    #[error("not a derivation: {0}")]
    NotADerivation(String),

    /// A JSON descriptor could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A precondition of a linear algebra operation was violated.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
