use crate::geom::Rational2;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("three vertices are collinear: ({}), ({}), ({})", .0[0], .0[1], .0[2])]
    Collinear([Rational2; 3]),
    #[error("vertex ({0}) appears twice")]
    DuplicateVertex(Rational2),
    #[error("parameter {value} exceeds cap {cap}")]
    CapExceeded { value: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("eps must lie strictly between 0 and 1, got {0}")]
    InvalidEps(String),
    #[error("total weight is zero")]
    ZeroTotalWeight,
    #[error("sample is empty")]
    EmptySample,
    #[error("family is empty")]
    EmptyFamily,
    #[error("halfplane {0} contains no segment")]
    InfeasibleInstance(usize),
    #[error("no valid sample after {0} attempts")]
    AttemptsExhausted(usize),
    #[error("invalid body {id}: {reason}")]
    InvalidBody { id: usize, reason: String },
    #[error("degenerate halfplane: a and b are both zero")]
    DegenerateHalfplane,
    #[error("operation requires a planar family")]
    NotPlanar,
}

impl Error {
    /// True for the two general-position failures.
    pub fn is_general_position(&self) -> bool {
        matches!(self, Error::Collinear(_) | Error::DuplicateVertex(_))
    }
}
