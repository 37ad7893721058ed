use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph6 parse error at byte {offset}: {msg}")]
    Graph6 { offset: usize, msg: String },
    #[error("line {line}: {msg}")]
    Text { line: usize, msg: String },
    #[error("formula parse error at {pos}: {msg}")]
    Formula { pos: usize, msg: String },
    #[error("size guard exceeded: {what} has {got} nodes, limit is {limit}")]
    Guard { what: &'static str, got: usize, limit: usize },
    #[error("proposition universes differ")]
    UniverseMismatch,
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid parameter for `{name}`: {msg}")]
    BadParam { name: String, msg: String },
    #[error("coloring is discrete")]
    Discrete,
    #[error("outside fragment: {0}")]
    Fragment(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("non-integral value {0} in exact mode")]
    NonIntegral(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("spec schema error: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
