use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("power with exponent zero is not defined")]
    PowerZeroExponent,
    #[error("operands are not comparable: {0}")]
    NotComparable(String),
    #[error("result is not a rational number")]
    Irrational,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("no binary join for elements {0} and {1}")]
    NoJoins(usize, usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("extension hypothesis fails: {0}")]
    HypothesisFailed(String),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("linear program exceeds the size cap of {0} variables")]
    ProblemTooLarge(usize),
    #[error("unknown catalog cone id {0:?}")]
    UnknownCatalogId(String),
    #[error("weights do not sum to one (sum = {0})")]
    NotProbability(String),
    #[error("vector touches 0 or infinity; only the inequality holds")]
    BoundaryCase,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive semidefinite (min eigenvalue {0})")]
    NotPsd(f64),
    #[error("matrix is not positive definite (min eigenvalue {0})")]
    NotPd(f64),
    #[error("point ({0}, {1}) lies outside the triangle 0 <= x <= t")]
    OutsideTriangle(f64, f64),
    #[error("point is not in the future cone")]
    NotCausal,
    #[error("sequence is not monotone at step {0}")]
    NotMonotone(usize),
    #[error("limit could not be certified within {0} steps")]
    Inconclusive(usize),
    #[error("increments are not summable")]
    NotSummable,
    #[error("basic open set is empty")]
    EmptyOpen,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
