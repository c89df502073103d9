use thiserror::Error;

/// Errors raised anywhere in the algebra, the laboratory or the expression layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("class error: {0}")]
    Class(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("empty grid: every grid point lies inside an exclusion neighborhood")]
    EmptyGrid,

    #[error("hypothesis error: {0}")]
    Hypothesis(String),

    #[error("tail vanished: survival function is 0 at x = {x}")]
    TailVanished { x: f64 },

    #[error("parse error at byte {offset}: expected {expected}, found {found}")]
    Parse {
        offset: usize,
        expected: String,
        found: String,
    },

    #[error("arity error at byte {offset}: {name} expects {expected}, got {found}")]
    Arity {
        offset: usize,
        name: String,
        expected: String,
        found: usize,
    },

    #[error("range error at byte {offset}: {message}")]
    Range { offset: usize, message: String },

    #[error("at {path}: {source}")]
    At { path: String, source: Box<Error> },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn class(msg: impl Into<String>) -> Self {
        Error::Class(msg.into())
    }

    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// Wraps the error with the AST path of the node that produced it.
    pub fn at(self, path: impl Into<String>) -> Self {
        Error::At {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with every `At` wrapper removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code used by the command-line front end.
    ///
    /// 2 for parse/config problems, 3 for domain/class problems, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Parse { .. } | Error::Arity { .. } | Error::Range { .. } | Error::Config(_) => 2,
            Error::Io(_) => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
