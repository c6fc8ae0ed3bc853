use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parenthesis string that does not describe a plane tree.
    #[error("invalid parenthesis string at index {index}: {reason}")]
    Parens { index: usize, reason: &'static str },

    #[error("invalid toll expression at column {column}: {reason}")]
    Toll { column: usize, reason: String },

    #[error("the zero polynomial is not a valid toll")]
    ZeroToll,

    #[error("the single-vertex tree has no join decomposition")]
    SingleVertex,

    #[error("n = {n} is above the enumeration guard ({guard}); raise the guard explicitly to enumerate")]
    EnumerationGuard { n: usize, guard: usize },

    #[error("series tables hold order {order}, cannot sample trees with {n} edges")]
    TablesTooShort { order: usize, n: usize },

    /// The toll does not satisfy the uniform maximal-monomial hypothesis of the scaling theorem.
    #[error("scaling hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
