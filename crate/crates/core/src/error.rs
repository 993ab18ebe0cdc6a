use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("section is zero")]
    ZeroSection,
    #[error("section does not lie in the given subspace")]
    SectionNotInSpace,
    #[error("every section in the set is zero")]
    AllZeroSections,
    #[error("subspace is zero-dimensional")]
    EmptySpace,
    #[error("divisor degree {degree} outside the supported range [{min}, {max}]")]
    PreconditionDegree { degree: usize, min: usize, max: usize },
    #[error("subspace codimension {codim} outside the supported range [{min}, {max}]")]
    PreconditionCodim { codim: usize, min: usize, max: usize },
    #[error("inconsistent large-model precomputation: {0}")]
    InconsistentPrecomp(String),
    #[error("points carry different size tags")]
    TagMismatch,
    #[error("no smooth curve found after {0} attempts")]
    SingularCurve(usize),
    #[error("unsupported characteristic: {0}")]
    BadCharacteristic(String),
    #[error("need {needed} affine rational points, curve has {found}")]
    InsufficientRationalPoints { needed: usize, found: usize },
    #[error("malformed bundle file: {0}")]
    MalformedFile(String),
    #[error("bundle format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("model and curve do not match: {0}")]
    CurveMismatch(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
