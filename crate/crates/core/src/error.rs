use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} is outside 1..={rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("the empty word has no root")]
    EmptyWord,

    #[error("{0}")]
    Domain(String),

    #[error("resource cap exceeded: {what} = {value} > {cap}")]
    ResourceCap { what: &'static str, value: usize, cap: usize },

    #[error("malformed graph of groups: {0}")]
    Structural(String),

    #[error("move {index} ({kind}) rejected: {reason}")]
    Certificate { index: usize, kind: &'static str, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
