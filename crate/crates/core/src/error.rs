use num_bigint::BigUint;
use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("universe too large: {predicted} matchings predicted, cap is {cap}")]
    UniverseTooLarge { predicted: BigUint, cap: usize },

    #[error(
        "compatibility graph too large: {vertices} vertices (cap {cap}) would need about {bytes} bytes of adjacency"
    )]
    GraphTooLarge {
        vertices: usize,
        cap: usize,
        bytes: u128,
    },

    /// The clique search visited more nodes than it was allowed to.
    /// No partial answer is ever returned in this case.
    #[error("branch-and-bound node budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("more than {cap} maximum cliques ({partial} collected before stopping)")]
    MaximaOverflow { cap: usize, partial: usize },

    #[error("families or matchings come from different universes")]
    UniverseMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// A result contradicted something that must hold by construction
    /// (for example a clique maximum below the size of a feasible star).
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
