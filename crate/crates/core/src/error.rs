use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("composition error: {0}")]
    Composition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error in `{input}`: {message}")]
    Parse { input: String, message: String },
    #[error("size error: {what} is {actual}, cap is {cap} (raise the cap with GFORGE_BOUND_OVERRIDE)")]
    Size { what: String, actual: usize, cap: usize },
    #[error("form error: {0}")]
    Form(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(input: &str, message: impl Into<String>) -> Self {
        Error::Parse { input: input.to_string(), message: message.into() }
    }

    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { field: field.into(), message: message.into() }
    }
}
