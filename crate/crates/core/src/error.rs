use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("table is not associative: ({a}*{b})*{c} = {left} but {a}*({b}*{c}) = {right}")]
    Associativity {
        a: usize,
        b: usize,
        c: usize,
        left: usize,
        right: usize,
    },
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
    #[error("operation requires a group: {0}")]
    NotAGroup(String),
    #[error("subset {0:?} is not closed under the operation")]
    NotASubsemigroup(Vec<usize>),
    #[error("a filter base must be non-empty")]
    EmptyBase,
    #[error("ultrafilter product law violated at p={p}, q={q}, A={set:?}")]
    ProductLawViolation { p: usize, q: usize, set: Vec<usize> },
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Process exit status for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeLimitExceeded(_) => 3,
            Error::ProductLawViolation { .. } => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Associativity { .. } => "AssociativityError",
            Error::Dimension(_) => "DimensionError",
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::SizeLimitExceeded(_) => "SizeLimitExceeded",
            Error::NotAGroup(_) => "NotAGroup",
            Error::NotASubsemigroup(_) => "NotASubsemigroup",
            Error::EmptyBase => "EmptyBase",
            Error::ProductLawViolation { .. } => "ProductLawViolation",
            Error::Schema { .. } => "SchemaError",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
