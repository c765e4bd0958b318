use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed or unsupported image file. `field` names the offending header field or section.
    #[error("format error in {field}: {message}")]
    Format { field: &'static str, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid template config: {0}")]
    Config(String),

    #[error("invalid phantom spec: {0}")]
    Spec(String),

    #[error("malformed flow network: {0}")]
    Network(String),

    #[error("cut invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn format(field: &'static str, message: impl Into<String>) -> Self {
        Error::Format {
            field,
            message: message.into(),
        }
    }
}
