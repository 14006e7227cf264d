use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("root_of_unity_order is undefined for zero")]
    ZeroInput,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("polynomial does not belong to this tower: {0}")]
    TowerMismatch(String),
    #[error("polynomial involves x{var} but only variables below level {level} are allowed")]
    SupportTooHigh { level: usize, var: usize },
    #[error("level {level}: sigma(x{var}) is not a diagonal twist (c != 0)")]
    NotDiagonal { level: usize, var: usize },
    #[error("swap compatibility failed at level {level}: {identity} with r = {witness}")]
    CompatibilityFailed { level: usize, witness: String, identity: String },
    #[error("unsupported erasure at level {level}: {reason}")]
    UnsupportedErasure { level: usize, reason: String },
    #[error("level {level}: q = 1, derivation cannot be erased")]
    QEqualsOne { level: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unknown variable `{name}`")]
    UnknownVariableReference { name: String, line: usize, column: usize },
}
