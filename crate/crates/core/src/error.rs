use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank {rank} is not admissible for series {series}")]
    InvalidRank { series: char, rank: usize },
    #[error("unknown simple factor `{0}`")]
    UnknownFactor(String),
    #[error("weight has {found} coordinates, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("no matrix realization for exceptional factor {0}")]
    UnsupportedExceptional(String),
    #[error("module {0} is outside the construction catalog")]
    UnsupportedModule(String),
    #[error("embedding is incompatible: {0}")]
    IncompatibleSpec(String),
    #[error("degenerate invariant form: {0}")]
    DegenerateForm(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("module refers to factor {index} but only {count} factors exist")]
    Arity { index: usize, count: usize },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("parameter constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
