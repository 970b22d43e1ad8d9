use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid element: {0}")]
    Element(String),
    #[error("{code}: {msg}")]
    Graph { code: &'static str, msg: String },
    #[error("{code} at {line}:{col}: {msg}")]
    Parse {
        code: &'static str,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("invalid word: {0}")]
    Word(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn graph(code: &'static str, msg: impl Into<String>) -> Self {
        Error::Graph {
            code,
            msg: msg.into(),
        }
    }

    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "E_DIMENSION",
            Error::Singular => "E_SINGULAR",
            Error::Element(_) => "E_ELEMENT",
            Error::Graph { code, .. } | Error::Parse { code, .. } => code,
            Error::Word(_) => "E_WORD",
            Error::Unsupported(_) => "E_UNSUPPORTED",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
