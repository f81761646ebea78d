use std::fmt;

use thiserror::Error;

/// A single broken invariant found while validating a [`NetworkConfig`](crate::NetworkConfig).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonPositiveSize,
    TooFewLayers,
    NoNodes,
    FewerNodesThanLayers,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Violation::NonPositiveSize => "network size L must be > 0",
            Violation::TooFewLayers => "maximum layer count n_Lmax must be > 1",
            Violation::NoNodes => "node count n_S must be >= 1",
            Violation::FewerNodesThanLayers => {
                "node count n_S must be >= n_Lmax so every outer layer receives a node"
            }
        };
        f.write_str(msg)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {}", join(.0))]
    InvalidConfig(Vec<Violation>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("sectors {first} and {second} overlap")]
    Overlap { first: usize, second: usize },

    #[error("point {index} has no sector tag")]
    UntaggedPoint { index: usize },

    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
