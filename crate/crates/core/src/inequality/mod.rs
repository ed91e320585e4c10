//! The determinantal Cauchy-Schwarz inequality
//! `|det(A^* M B)|^2 <= det(A^* M A) det(B^* M B)` for `A, B` in `C^{m x n}`
//! and hermitian positive definite `M`.
//!
//! For `m > n` and full column rank, the ratio of the two sides is the square
//! of the determinantal correlation `|det(Q_A^* Q_B)|` of the thin-QR factors,
//! which is at most 1 and equals 1 exactly when the column spaces coincide.
//! Every other case is an equality.

mod case;
mod report;
mod subspace;

pub use case::{classify_case, classify_case_with, CaseTag};
pub use report::{
    gram, hadamard_bound, verify_inequality, verify_inequality_with, whitened_pair, CsReport,
    HadamardBound, Tolerances, DEFAULT_EQUALITY_TOL, DEFAULT_SUBSPACE_TOL,
};
pub use subspace::{
    column_norm_profile, det_correlation, det_correlation_raw, subspace_equal, SubspaceBasis,
    ORTHONORMAL_TOL, UNIT_BOUND_SLACK,
};
