use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} is congruent to 2 mod 4 and has no difference-of-squares representation")]
    NoRepresentation(BigInt),
    #[error("lattice basis rows are linearly dependent")]
    Rank,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("instance generation failed: {0}")]
    Generation(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
