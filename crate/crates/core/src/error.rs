use crate::scalar::Backend;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("backend mismatch: {left:?} vs {right:?}")]
    BackendMismatch { left: Backend, right: Backend },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("resultant of two constant polynomials is undefined")]
    ConstantPolynomials,

    #[error("point is not on the curve (residual {residual})")]
    NotOnCurve { residual: String },

    #[error("curve is singular at the point (gradient vanishes)")]
    SingularPoint,

    #[error("point is a flex; the osculating conic is not defined there")]
    FlexPoint,

    #[error("expected a curve of degree {expected}, got {found}")]
    WrongDegree { expected: u32, found: u32 },

    #[error("order {requested} exceeds truncation order {truncation}")]
    OrderTooLarge { requested: usize, truncation: usize },

    #[error("all coefficients vanish through order {order}; raise the truncation order")]
    Saturated { order: usize },

    #[error("gap search found only {found} gaps up to order {limit}")]
    GapInconsistency { found: usize, limit: usize },

    #[error("kernel of the {rows}x{cols} condition matrix has dimension {dimension}, expected {expected}")]
    RankAnomaly {
        rows: usize,
        cols: usize,
        dimension: usize,
        expected: usize,
    },

    #[error("duplicate point {0}")]
    DuplicatePoint(String),

    #[error("Hessian of the curve vanishes identically")]
    DegenerateHessian,

    #[error("elimination failed: resultant vanishes for every variable order")]
    EliminationFailed,

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("invalid minimal polynomial: {0}")]
    InvalidModulus(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}

impl Error {
    /// Internal inconsistencies (numerical or algorithmic failures) as
    /// opposed to problems with the input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Saturated { .. }
                | Error::GapInconsistency { .. }
                | Error::RankAnomaly { .. }
                | Error::EliminationFailed
        )
    }
}
