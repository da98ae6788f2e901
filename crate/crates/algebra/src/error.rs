use thiserror::Error;

use crate::ring::VarId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("no value assigned to variable {0}")]
    MissingAssignment(VarId),
    #[error("variable index {index} out of range for a ring with {dim} variables")]
    VariableOutOfRange { index: usize, dim: usize },
    #[error("invalid term order: {0}")]
    InvalidOrder(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("division by zero")]
    DivisionByZero,
}
