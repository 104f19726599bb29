use thiserror::Error;

use crate::graph::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("comparison undecidable at {bits} bits")]
    ComparisonUndecidable { bits: u32 },
    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),
    #[error("invalid power term: {0}")]
    InvalidTerm(String),
    #[error("the zero gain is not invertible")]
    NotInvertible,

    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("invalid network: {}", format_diagnostics(.0))]
    InvalidNetwork(Vec<Diagnostic>),
    #[error("no gain from `{from}` into `{to}`")]
    MissingGain { to: String, from: String },
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("cycle budget of {budget} exceeded")]
    CycleBudgetExceeded { budget: usize },
    #[error("path budget of {budget} exceeded")]
    PathBudgetExceeded { budget: usize },

    #[error("motif no longer matches: {0}")]
    MotifInvalidated(String),
    #[error("network is not strongly connected")]
    NotStronglyConnected,
    #[error("step mismatch: {0}")]
    StepMismatch(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("omega path search failed after {rounds} rounds; node `{node}` violated at t = {witness}")]
    OmegaPathSearchFailed {
        rounds: usize,
        node: String,
        witness: String,
    },
    #[error("omega path component for `{0}` is the zero gain")]
    EmptyComponent(String),
    #[error("omega path has not been verified")]
    UnverifiedPath,

    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
