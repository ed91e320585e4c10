use super::matrix::{ComplexMatrix, ComplexScalar, ZERO};
use crate::error::{Error, Result};

/// Relative tolerance on `|M - M^*|_F / |M|_F`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Cholesky pivots must exceed this multiple of the largest diagonal entry.
pub const PD_PIVOT_TOL: f64 = 1e-13;

/// A validated hermitian positive definite matrix `M` with an upper
/// triangular factor `W` such that `W^* W = M`.
///
/// `W` stands in for the square root of `M`: any factor with `W^* W = M`
/// satisfies `A^* M B = (W A)^* (W B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HpdFactor {
    m_matrix: ComplexMatrix,
    w_factor: ComplexMatrix,
}

impl HpdFactor {
    pub fn m_matrix(&self) -> &ComplexMatrix {
        &self.m_matrix
    }

    pub fn w_factor(&self) -> &ComplexMatrix {
        &self.w_factor
    }

    pub fn dim(&self) -> usize {
        self.m_matrix.rows()
    }

    /// `W a`.
    pub fn whiten(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                op: "whiten",
                expected: format!("{} rows", self.dim()),
                found: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        self.w_factor.matmul(a)
    }
}

/// Validates `m_matrix` as hermitian positive definite and factors it.
pub fn cholesky_hpd(m_matrix: &ComplexMatrix) -> Result<HpdFactor> {
    let n = m_matrix.require_square("cholesky_hpd")?;

    let asymmetry = m_matrix.sub(&m_matrix.conj_transpose())?.frobenius_norm();
    let norm = m_matrix.frobenius_norm();
    if asymmetry > HERMITIAN_TOL * norm {
        return Err(Error::NotHermitian {
            asymmetry: if norm > 0.0 { asymmetry / norm } else { asymmetry },
        });
    }

    let max_diag = (0..n).map(|i| m_matrix[(i, i)].re).fold(0.0, f64::max);
    let cutoff = PD_PIVOT_TOL * max_diag;

    // Lower factor L with M = L L^*, built column by column.
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m_matrix[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > cutoff) {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ComplexScalar::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = m_matrix[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }

    let w_factor = l.conj_transpose();
    debug_assert!((0..n).all(|i| (0..i).all(|j| w_factor[(i, j)] == ZERO)));
    Ok(HpdFactor {
        m_matrix: m_matrix.clone(),
        w_factor,
    })
}
