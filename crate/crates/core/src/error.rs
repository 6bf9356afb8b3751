use thiserror::Error;

/// Errors raised while constructing or querying invariants and neighborhoods.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid terminal point: {0}")]
    InvalidPoint(String),

    #[error("invalid basket entry ({b}, {r}): {reason}")]
    InvalidBasket { b: u64, r: u64, reason: &'static str },

    #[error("invalid Du Val graph {kind}{rank}")]
    InvalidGraph { kind: char, rank: u64 },

    #[error("{0} has no connected Du Val graph")]
    NoConnectedGraph(String),

    #[error("unknown singularity type `{0}`")]
    UnknownType(String),

    #[error("unknown case label `{0}`")]
    UnknownCase(String),

    #[error("case {label} has no {kind} variant")]
    WrongKind { label: &'static str, kind: &'static str },

    #[error("invalid parameters for case {label}: {reason}")]
    InvalidParams { label: &'static str, reason: String },

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid recursion input: {0}")]
    InvalidRecursion(String),

    #[error("no sign change within {0} steps")]
    NoSignChange(usize),

    #[error("malformed graph notation `{0}`")]
    GraphSyntax(String),
}

pub type Result<T> = std::result::Result<T, Error>;
