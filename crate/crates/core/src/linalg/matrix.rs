use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used by every kernel.
pub type ComplexScalar = Complex64;

pub(crate) const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub(crate) const ONE: ComplexScalar = Complex64::new(1.0, 0.0);

/// Dense complex matrix stored in row-major order.
///
/// Both dimensions are at least one and every entry is finite. Constructors
/// taking untrusted data validate this; the arithmetic kernels preserve it
/// for well-scaled inputs.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexScalar>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<ComplexScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "ComplexMatrix::new",
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix with real entries given in row-major order.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<ComplexScalar>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch {
                op: "ComplexMatrix::from_columns",
                expected: format!("columns of length {rows}"),
                found: format!("column of length {}", bad.len()),
            });
        }
        let mut data = vec![ZERO; rows * cols];
        for (j, column) in columns.iter().enumerate() {
            for (i, &z) in column.iter().enumerate() {
                data[i * cols + j] = z;
            }
        }
        Self::new(rows, cols, data)
    }

    /// Builds a matrix entry by entry.
    ///
    /// # Panics
    ///
    /// Panics if a dimension is zero.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> ComplexScalar,
    ) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    /// Square matrix with the given diagonal.
    pub fn from_diagonal(diag: &[ComplexScalar]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    /// The `index`-th standard basis vector of length `len`, as a column.
    pub fn unit_vector(len: usize, index: usize) -> Vec<ComplexScalar> {
        let mut v = vec![ZERO; len];
        v[index] = ONE;
        v
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[ComplexScalar] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<ComplexScalar> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Euclidean norm of column `j`.
    pub fn column_norm(&self, j: usize) -> f64 {
        (0..self.rows)
            .map(|i| self[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Matrix product `self * rhs`, summing over the inner index left to right.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                expected: format!("{} rows in right operand", self.cols),
                found: format!("{}x{}", rhs.rows, rhs.cols),
            });
        }
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; m * n];
        for i in 0..m {
            let row = &self.data[i * k..(i + 1) * k];
            let dst = &mut out[i * n..(i + 1) * n];
            for (p, &a) in row.iter().enumerate() {
                let src = &rhs.data[p * n..(p + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(ComplexMatrix {
            rows: m,
            cols: n,
            data: out,
        })
    }

    /// `self^* rhs` without materialising the adjoint.
    pub fn adjoint_mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "adjoint_mul",
                expected: format!("{} rows in right operand", self.rows),
                found: format!("{}x{}", rhs.rows, rhs.cols),
            });
        }
        let (m, k, n) = (self.cols, self.rows, rhs.cols);
        let mut out = vec![ZERO; m * n];
        for p in 0..k {
            let lrow = &self.data[p * m..(p + 1) * m];
            let rrow = &rhs.data[p * n..(p + 1) * n];
            for (i, &a) in lrow.iter().enumerate() {
                let a = a.conj();
                for (d, &b) in out[i * n..(i + 1) * n].iter_mut().zip(rrow) {
                    *d += a * b;
                }
            }
        }
        Ok(ComplexMatrix {
            rows: m,
            cols: n,
            data: out,
        })
    }

    /// Conjugate transpose.
    pub fn conj_transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: ComplexScalar) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &ComplexMatrix,
        op: &'static str,
        f: impl Fn(ComplexScalar, ComplexScalar) -> ComplexScalar,
    ) -> Result<ComplexMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op,
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", rhs.rows, rhs.cols),
            });
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Frobenius distance to the identity; meaningful for square matrices.
    pub(crate) fn distance_to_identity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let target = if i == j { ONE } else { ZERO };
                acc += (self[(i, j)] - target).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub(crate) fn require_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = ComplexScalar;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "({:+.6e} {:+.6e}i) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_times_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.matmul(&i2).unwrap(), i2);
    }

    #[test]
    fn permutation_swaps_rows() {
        let p = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let m = ComplexMatrix::new(2, 2, vec![c(1.0, 2.0), c(3.0, 0.0), c(0.0, -1.0), c(5.0, 5.0)])
            .unwrap();
        let swapped = p.matmul(&m).unwrap();
        assert_eq!(swapped.as_slice(), &[c(0.0, -1.0), c(5.0, 5.0), c(1.0, 2.0), c(3.0, 0.0)]);
    }

    #[test]
    fn conj_transpose_of_imaginary_unit() {
        let m = ComplexMatrix::new(1, 1, vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(m.conj_transpose()[(0, 0)], c(0.0, -1.0));
        assert_eq!(ComplexMatrix::identity(4).conj_transpose(), ComplexMatrix::identity(4));
    }

    #[test]
    fn adjoint_mul_matches_explicit_adjoint() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64 - 0.5, j as f64 + 0.25 * i as f64));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c((i * j) as f64, 1.0 - j as f64));
        let direct = a.conj_transpose().matmul(&b).unwrap();
        assert_eq!(a.adjoint_mul(&b).unwrap(), direct);
    }

    #[test]
    fn matmul_rejects_mismatched_shapes() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn constructor_validates_entries() {
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![ONE]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![ONE, c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(
            ComplexMatrix::new(0, 2, vec![]),
            Err(Error::EmptyMatrix { .. })
        ));
    }

    #[test]
    fn from_columns_places_vectors_as_columns() {
        let m = ComplexMatrix::from_columns(&[
            ComplexMatrix::unit_vector(3, 0),
            ComplexMatrix::unit_vector(3, 2),
        ])
        .unwrap();
        assert_eq!(m.shape(), (3, 2));
        assert_eq!(m[(0, 0)], ONE);
        assert_eq!(m[(2, 1)], ONE);
        assert_eq!(m[(1, 1)], ZERO);
    }
}
