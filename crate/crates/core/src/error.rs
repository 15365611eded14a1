use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group order {order} exceeds the supported bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("element index {0} is not in the group")]
    UnknownElement(usize),
    #[error("unknown element name `{0}`")]
    UnknownElementName(String),
    #[error("the identity is not allowed here")]
    IdentityElement,
    #[error("invalid alpha function: {0}")]
    InvalidAlpha(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("walk step {step} is not incident with the previous vertex")]
    IncidenceMismatch { step: usize },
    #[error("edge set is empty")]
    EmptyEdgeSet,
    #[error("edge set is not connected")]
    Disconnected,
    #[error("edge set contains a cycle")]
    NotAForest,
    #[error("invalid split partition: {0}")]
    InvalidPartition(String),
    #[error("vertex {0} is not a base of the near-balanced set")]
    NotABase(usize),
    #[error("invalid sparsity parameters: {0}")]
    InvalidParams(String),
    #[error("instance too large for exhaustive mode: {what} is {size}, bound is {bound}")]
    TooLarge {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("graph is not f_alpha-sparse")]
    NotSparse,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
