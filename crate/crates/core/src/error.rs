use thiserror::Error;

use crate::series::SeriesId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The argument sits too close to a pole of the kernel for the working precision.
    #[error("argument within {distance:e} of a pole (limit {limit:e})")]
    PoleProximity { distance: f64, limit: f64 },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// A comparison that cannot be decided at the working precision.
    #[error("undecidable at working precision for n = {n}: {what}")]
    Undecidable { n: u64, what: String },

    #[error("series {id} term n = {n}: {source}")]
    Term {
        id: SeriesId,
        n: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),

    #[error("checkpoint content hash mismatch (stored {stored}, computed {computed})")]
    HashMismatch { stored: String, computed: String },

    #[error("tail bound {bound:e} exceeds budget {budget:e}")]
    TailBound { bound: f64, budget: f64 },

    #[error("quadrature error {estimate:e} exceeds budget {budget:e}")]
    QuadratureBudget { estimate: f64, budget: f64 },

    /// A zero entry in an integer-relation query; `relation` is the trivial relation it implies.
    #[error("degenerate input: value {index} is zero (trivial relation {relation:?})")]
    DegenerateInput { index: usize, relation: Vec<i64> },

    #[error("malformed data: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn at_term(self, id: SeriesId, n: u64) -> Self {
        match self {
            e @ Error::Term { .. } => e,
            e => Error::Term { id, n, source: Box::new(e) },
        }
    }

    /// Strips term context, yielding the underlying cause.
    pub fn root(&self) -> &Error {
        match self {
            Error::Term { source, .. } => source.root(),
            e => e,
        }
    }
}
