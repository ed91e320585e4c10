//! Dense complex kernels: products, LU log-determinants, Householder QR,
//! Cholesky and rank estimation.

mod cholesky;
mod logdet;
mod matrix;
mod qr;

pub use cholesky::{cholesky_hpd, HpdFactor, HERMITIAN_TOL, PD_PIVOT_TOL};
pub use logdet::{
    log_det, log_det_against_scale, log_det_with_threshold, SignedLogDet, DEFAULT_SINGULAR_THRESHOLD,
};
pub use matrix::{ComplexMatrix, ComplexScalar};
pub use qr::{estimate_rank, qr_thin, qr_thin_with_tol, QRFactors, DEFAULT_RANK_TOL};

#[allow(unused_imports)]
pub(crate) use matrix::{ONE, ZERO};

/// `a b`. Free-function form of [`ComplexMatrix::matmul`].
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    a.matmul(b)
}

/// `a^*`. Free-function form of [`ComplexMatrix::conj_transpose`].
pub fn conj_transpose(a: &ComplexMatrix) -> ComplexMatrix {
    a.conj_transpose()
}
