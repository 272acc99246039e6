use thiserror::Error;

use crate::scalar::ScalarError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("singular matrix")]
    Singular,
    #[error("zero vector is not a point of the Segre variety")]
    ZeroVector,
    #[error("zero tensor")]
    ZeroTensor,
    #[error("not in σ₂(X): a flattening has rank ≥ 3")]
    NotInSigma2,
    #[error("type undefined outside σ₂")]
    EtaUndefined,
    #[error("tensor is not of rank one")]
    NotRankOne,
    #[error("pencil entirely rank ≤ 1 (input is not concise)")]
    PencilDegenerate,
    #[error("degenerate parameter choice: the last coefficient vanishes; retry with a different first parameter, e.g. t₁ = {suggestion}")]
    DegenerateParams { suggestion: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
