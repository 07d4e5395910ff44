use thiserror::Error;

/// Errors raised by the algebraic routines and the text parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operand arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("rational function has a pole at the evaluation point")]
    PoleAtPoint,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("components have different degrees")]
    DegreeMismatch,
    #[error("all components vanish identically")]
    ZeroMap,
    #[error("reduced components are constant")]
    ConstantMap,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("projective point has all coordinates zero")]
    ZeroPoint,
    #[error("map is indeterminate at the point")]
    IndeterminateAtPoint,
    #[error("map has no representation on the chart x0 != 0")]
    ChartDegenerate,
    #[error("family of maps is empty")]
    EmptyFamily,
    #[error("scaling parameter must be nonzero")]
    ZeroParameter,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("an inverse map is required")]
    MissingInverse,
    #[error("matrix does not have determinant 1")]
    NotUnimodular,
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u64),
    #[error("points coincide")]
    DegeneratePair,
    #[error("eigenvalue must differ from 0 and 1")]
    BadEigenvalue,
    #[error("supplied inverse does not compose to the identity")]
    InverseCheckFailed,
    #[error("linear part is singular")]
    SingularLinearPart,
    #[error("not a cocycle")]
    NotACocycle,
    #[error("matrix is singular")]
    Singular,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field automorphism not defined on this field")]
    UnsupportedAutomorphism,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable upper-case identifier, printed by the CLI on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::FieldMismatch => "FIELD_MISMATCH",
            Error::DivisionByZero => "DIVISION_BY_ZERO",
            Error::ArityMismatch { .. } => "ARITY_MISMATCH",
            Error::PoleAtPoint => "POLE_AT_POINT",
            Error::NotHomogeneous => "NOT_HOMOGENEOUS",
            Error::DegreeMismatch => "DEGREE_MISMATCH",
            Error::ZeroMap => "ZERO_MAP",
            Error::ConstantMap => "CONSTANT_MAP",
            Error::DimMismatch { .. } => "DIM_MISMATCH",
            Error::ZeroPoint => "ZERO_POINT",
            Error::IndeterminateAtPoint => "INDETERMINATE_AT_POINT",
            Error::ChartDegenerate => "CHART_DEGENERATE",
            Error::EmptyFamily => "EMPTY_FAMILY",
            Error::ZeroParameter => "ZERO_PARAMETER",
            Error::PreconditionViolated(_) => "PRECONDITION_VIOLATED",
            Error::MissingInverse => "MISSING_INVERSE",
            Error::NotUnimodular => "NOT_UNIMODULAR",
            Error::BadModulus(_) => "BAD_MODULUS",
            Error::DegeneratePair => "DEGENERATE_PAIR",
            Error::BadEigenvalue => "BAD_EIGENVALUE",
            Error::InverseCheckFailed => "INVERSE_CHECK_FAILED",
            Error::SingularLinearPart => "SINGULAR_LINEAR_PART",
            Error::NotACocycle => "NOT_A_COCYCLE",
            Error::Singular => "SINGULAR",
            Error::NotPrime(_) => "NOT_PRIME",
            Error::UnsupportedAutomorphism => "UNSUPPORTED_AUTOMORPHISM",
            Error::Parse(_) => "PARSE_ERROR",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
