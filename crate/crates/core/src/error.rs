use thiserror::Error;

/// Errors raised across the library. The CLI maps them onto exit codes with
/// [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("response column `{0}` not found in header")]
    MissingResponseColumn(String),

    #[error("column `{0}` not found in header")]
    MissingColumn(String),

    #[error("duplicate column `{0}`")]
    DuplicateColumn(String),

    #[error("dataset has no attribute columns")]
    NoAttributes,

    #[error("row {row}, column `{column}`: value `{value}` violates the declared scale")]
    SchemaViolation {
        row: usize,
        column: String,
        value: String,
    },

    #[error("malformed CSV at row {row}: {message}")]
    MalformedCsv { row: usize, message: String },

    #[error("dataset has no rows")]
    EmptyDataset,

    #[error("invalid scale {min}..{max}: max must exceed min")]
    InvalidScale { min: i32, max: i32 },

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("too few rows: need at least {needed}, got {got}")]
    TooFewRows { needed: usize, got: usize },

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("profile and null distribution disagree on shape: {0}")]
    MismatchedShapes(String),

    #[error("analysis products are inconsistent: {0}")]
    InconsistentProducts(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("report JSON: {0}")]
    Json(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// 2 for input or schema problems, 3 when the data is valid but too small.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TooFewRows { .. } | Error::EmptyTrainingSet => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
