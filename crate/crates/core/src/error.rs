//! Shared error type for the engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("generator index {index} out of range for {n} generator pair(s)")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("basis enumeration refuses {n} generator pairs (guard is {max})")]
    TooManyGenerators { n: usize, max: usize },

    #[error("no relation transposes {left} with {right}")]
    ForbiddenTransposition { left: String, right: String },

    #[error("swap of same-grade items {left} and {right} is not defined")]
    UndefinedSwap { left: String, right: String },

    #[error("weight system is singular: {0}")]
    SingularWeight(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),
}
