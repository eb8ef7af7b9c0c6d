use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chart dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a unit: {0}")]
    NotUnit(String),

    #[error("not a chain complex: {0}")]
    NotAComplex(String),

    #[error("simplicial identity violated: {0}")]
    NotSimplicial(String),

    #[error("truncation level {truncation} too small for homology up to degree {degree} (need at least {needed})")]
    TruncationTooSmall {
        degree: usize,
        truncation: usize,
        needed: usize,
    },

    #[error("size guard exceeded: {what} = {size} > {cap}")]
    GuardExceeded { what: String, size: usize, cap: usize },

    #[error("value not expressible on overlap {tuple:?}: {detail}")]
    NotExpressible { tuple: Vec<usize>, detail: String },

    #[error("bidegree mismatch: ({0}, {1}) vs ({2}, {3})")]
    BidegreeMismatch(usize, usize, usize, usize),

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("division obstruction: coefficient c_{k} needs division by {k} in characteristic {p}; use the split path")]
    DivisionObstruction { k: usize, p: u64 },

    #[error("base ring must be F_p for this operation")]
    NotFp,

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("division by p is not exact: {0}")]
    InexactDivision(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    /// Stable machine-readable code for diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NotUnit(_) => "not_unit",
            Error::NotAComplex(_) => "not_a_complex",
            Error::NotSimplicial(_) => "not_simplicial",
            Error::TruncationTooSmall { .. } => "truncation_too_small",
            Error::GuardExceeded { .. } => "guard_exceeded",
            Error::NotExpressible { .. } => "not_expressible",
            Error::BidegreeMismatch(..) => "bidegree_mismatch",
            Error::InvalidScheme(_) => "invalid_scheme",
            Error::InvalidBundle(_) => "invalid_bundle",
            Error::DivisionObstruction { .. } => "division_obstruction",
            Error::NotFp => "not_fp",
            Error::RankMismatch { .. } => "rank_mismatch",
            Error::InexactDivision(_) => "inexact_division",
            Error::Unsupported(_) => "unsupported",
            Error::Parse { .. } => "parse_error",
        }
    }

    /// Errors caused by malformed input rather than by a computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::InvalidScheme(_)
                | Error::InvalidBundle(_)
                | Error::InvalidArgument(_)
                | Error::NotFp
                | Error::RankMismatch { .. }
        )
    }
}
