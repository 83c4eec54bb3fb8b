use thiserror::Error;

/// Errors raised by the exact arithmetic, curve and quadruple layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no square class")]
    ZeroInput,
    #[error("{0} is not a rational square")]
    NotASquare(String),
    #[error("operands live in different quadratic fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand {0} is a rational square; use rational arithmetic instead")]
    SquareRadicand(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("point maps to a point at infinity of the projective closure of D_m")]
    NonAffineImage,
    #[error("point is a pole of g")]
    PoleOfG,
    #[error("triple is degenerate: orbits under G are not pairwise disjoint")]
    DegenerateTriple,
    #[error("(y1^2-q)*g(Q1+Q2+Q3) is not a rational square")]
    SquareConditionFails,
    #[error("constructed entries are not four distinct nonzero rationals: {0}")]
    DegenerateQuadruple(String),
    #[error("product of entries {found} differs from m = {expected}")]
    ProductMismatch { expected: String, found: String },
    #[error("entries do not form a D(q)-quadruple: {0}")]
    NotAQuadruple(String),
    #[error("map is undefined at the requested point")]
    MapUndefined,
    #[error("no rational point on D_m found up to the search bound and none supplied")]
    NoBasePoint,
}

pub type Result<T> = std::result::Result<T, Error>;
