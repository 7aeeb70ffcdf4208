//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("permutation size mismatch: {0} vs {1}")]
    PermutationSize(usize, usize),

    #[error("partition bound exceeded: n = {n} is larger than the configured bound {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("map does not carry the source subspace into the target subspace: {0}")]
    NotContained(String),

    #[error("not a valid complex: {0}")]
    InvalidComplex(String),

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("not a valid differential graded Lie algebra: {0}")]
    InvalidDgla(String),

    #[error("not a valid module: {0}")]
    InvalidModule(String),

    #[error("not a valid action instance: {0}")]
    InvalidInstance(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
