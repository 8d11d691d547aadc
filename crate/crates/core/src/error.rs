use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant carries a stable machine-readable code (see [`Error::code`])
/// used by the command-line frontend.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (anti-Hermitian residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("not a density matrix: {reason}")]
    NotDensityMatrix { reason: String },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("negative evolution time {0} (positivity is not preserved backwards in time)")]
    NegativeTime(f64),

    #[error("density matrix has full rank, no emerging eigenvalue exists")]
    FullRank,

    #[error("basis vectors are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("matrix is not an orthogonal projector (deviation {deviation:e})")]
    NotProjector { deviation: f64 },

    #[error("operator has a zero eigenvalue; use the attractive face instead")]
    ZeroEigenvalue,

    #[error("operator has no zero eigenvalue")]
    NoZeroEigenvalue,

    #[error("operator is decomposable into {blocks} parts; apply per block")]
    Decomposable { blocks: usize },

    #[error("the maximally mixed state is never the unique stationary state of a simple generator")]
    MaximallyMixed,

    #[error("rank-deficient mixed states cannot be the unique stationary state of a simple generator")]
    NotUniquelyDesignable,

    #[error("stationary state is not unique (b = 0 leaves the whole diagonal family stationary)")]
    NotUnique,

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("validation failed: {0}")]
    ValidationFailure(String),

    #[error("block is not upper triangular (|C| = {norm:e})")]
    NotTriangular { norm: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier for machine-readable error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotDensityMatrix { .. } => "NotDensityMatrix",
            Error::MalformedMatrix(_) => "MalformedMatrix",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::NegativeTime(_) => "NegativeTime",
            Error::FullRank => "FullRank",
            Error::NotOrthonormal { .. } => "NotOrthonormal",
            Error::NotProjector { .. } => "NotProjector",
            Error::ZeroEigenvalue => "ZeroEigenvalue",
            Error::NoZeroEigenvalue => "NoZeroEigenvalue",
            Error::Decomposable { .. } => "Decomposable",
            Error::MaximallyMixed => "MaximallyMixed",
            Error::NotUniquelyDesignable => "NotUniquelyDesignable",
            Error::NotUnique => "NotUnique",
            Error::Unsupported(_) => "Unsupported",
            Error::ValidationFailure(_) => "ValidationFailure",
            Error::NotTriangular { .. } => "NotTriangular",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "IoError",
        }
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalFailure(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
