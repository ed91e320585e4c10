//! Verification of the determinantal analogue of the Cauchy-Schwarz
//! inequality,
//!
//! ```text
//! |det(A^* M B)|^2 <= det(A^* M A) * det(B^* M B),    A, B in C^{m x n},
//! ```
//!
//! with `M` hermitian positive definite, together with the classification
//! of when equality holds and the determinantal correlation between column
//! spaces that governs the gap.
//!
//! * [`linalg`]: dense complex kernels (LU log-determinant, Householder QR,
//!   Cholesky, rank estimation).
//! * [`inequality`]: Gram products, correlation, case classification and
//!   verification reports.
//! * [`oracle`]: brute-force references used to cross-check the kernels.
//! * [`io`], [`ensembles`], [`fuzz`], [`cli`]: matrix files, random
//!   ensembles, the randomized harness and the `detcs` command front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod ensembles;
mod error;
pub mod fuzz;
pub mod inequality;
pub mod io;
pub mod linalg;
pub mod oracle;

pub use error::{Error, Result};
pub use inequality::{
    classify_case, column_norm_profile, det_correlation, gram, hadamard_bound, subspace_equal,
    verify_inequality, whitened_pair, CaseTag, CsReport, SubspaceBasis, Tolerances,
};
pub use linalg::{
    cholesky_hpd, conj_transpose, estimate_rank, log_det, matmul, qr_thin, ComplexMatrix,
    ComplexScalar, HpdFactor, QRFactors, SignedLogDet,
};
