use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("class belongs to a different ring")]
    BasisMismatch,
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix is {got}x{got}, ring needs {expected}x{expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("action `{0}` failed validation")]
    NotValidated(String),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("actions live on different rings")]
    RingMismatch,
    #[error("certified width {best} does not meet tolerance {tol}")]
    ToleranceUnreachable { best: String, tol: String },
    #[error("root solver failed: {0}")]
    RootSolver(String),
    #[error("the zero class has no numerical dimension")]
    ZeroClass,
    #[error("not an ample candidate: {0}")]
    NotAmpleCandidate(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("hypotheses not met: {}", .0.join("; "))]
    HypothesesNotMet(Vec<String>),
    #[error("expected a class of degree {expected}, got degree {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("inconsistent document: {0}")]
    Consistency(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("{0}")]
    Io(String),
}
