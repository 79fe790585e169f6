use crate::polyring::VarIndex;

/// Errors produced by the symbolic engine.
///
/// `TheoremViolation`, `InternalInconsistency` and `NoSolution` are
/// distinguished failures: they mean the engine has produced a counterexample
/// to an identity that holds unconditionally over the rationals, so they
/// always indicate a bug rather than bad input. They carry the offending
/// symbolic state rendered as text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("mismatched ambient matrix size: {0} vs {1}")]
    MismatchedAmbient(usize, usize),
    #[error("polynomial division by zero")]
    DivisionByZero,
    #[error("polynomial is not exactly divisible by the divisor")]
    NotDivisible,
    #[error("no value assigned to variable {0}")]
    MissingAssignment(VarIndex),
    #[error("invalid matrix size {0}: must be at least 1")]
    InvalidSize(usize),
    #[error("not homogeneous of degree {expected}: {detail}")]
    NotHomogeneous { expected: u32, detail: String },
    #[error("iterated partial order {order} exceeds map degree {degree}")]
    OutOfRange { order: u32, degree: u32 },
    #[error("map is not commuting: [q, Y] != 0")]
    NotCommuting,
    #[error("maps in the identity do not share a common degree")]
    MismatchedDegrees,
    #[error("not an identity: {0}")]
    NotAnIdentity(String),
    #[error("degree obstruction: map degree {degree} is below {required} = m*(n-1) for exponent m = {exponent}")]
    DegreeObstruction {
        degree: u32,
        required: u32,
        exponent: usize,
    },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("linear system has no solution: {0}")]
    NoSolution(String),
}
