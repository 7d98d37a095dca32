use thiserror::Error;

use crate::formula::ParseError;

/// Errors raised by the library. Budget refusals are kept distinct so callers
/// (the CLI in particular) can map them to their own exit status.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty multi-sample")]
    EmptySample,

    #[error("empty instance set")]
    EmptyInstanceSet,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("restriction oracle is not exact on the requested set")]
    InexactOracle,

    #[error("budget exceeded: {required} units required, {allowed} allowed")]
    Budget { required: u128, allowed: u128 },

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("the exact backend cannot evaluate exp(..)")]
    ExactBackendExp,

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("pairing identity violated at sample tuple {tuple}, point {point}: count {count} != {expected}")]
    PairingIdentity {
        tuple: usize,
        point: usize,
        count: usize,
        expected: usize,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
