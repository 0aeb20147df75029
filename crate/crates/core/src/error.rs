use thiserror::Error;

use crate::ordinals::Ordinal;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid node: {0}")]
    InvalidNode(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("illegal walk: {0}")]
    IllegalWalk(String),

    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    #[error("distance unresolved within budget (lower bound {lower_bound})")]
    Unresolved { lower_bound: Ordinal },

    /// A construction produced something its own theory forbids; always a bug.
    #[error("internal defect: {0}")]
    Defect(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
