use thiserror::Error;

use crate::inequality::CaseTag;

/// Errors raised by the kernels, the inequality checks and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch, expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },

    #[error("{op}: expected a square matrix, found {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix has zero rows or columns ({rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{op}: requires at least as many rows as columns, found {rows}x{cols}")]
    TooFewRows {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("rank deficient: estimated rank {rank}, need {required}")]
    RankDeficient { rank: usize, required: usize },

    #[error("matrix is not hermitian (relative asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("correlation needs more rows than columns, found m={rows}, n={cols}")]
    WrongRegime { rows: usize, cols: usize },

    #[error("columns are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("inequality violated in case {case:?}: log lhs {lhs_log} exceeds log rhs {rhs_log}")]
    InequalityViolation {
        case: CaseTag,
        lhs_log: f64,
        rhs_log: f64,
    },

    #[error("bound violated: {what} = {value} exceeds {limit}")]
    BoundViolation {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("oracle refuses n = {n}, limit is {limit}")]
    OracleScale { n: usize, limit: usize },

    #[error("no counterexample found in {trials} trials")]
    SearchExhausted { trials: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
