use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ComplexScalar, ONE};
use crate::error::Result;

/// Pivots smaller than this multiple of the largest input entry count as zero.
pub const DEFAULT_SINGULAR_THRESHOLD: f64 = 1e-13;

/// A determinant stored as `phase * exp(log_magnitude)`, or an exact zero.
///
/// Products of determinants of Gram matrices overflow `f64` for fairly small
/// sizes; keeping the logarithm of the magnitude avoids that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogDet {
    /// Unit-modulus phase. Meaningless when `zero` is set.
    pub phase: ComplexScalar,
    pub log_magnitude: f64,
    pub zero: bool,
}

impl SignedLogDet {
    pub const ONE: SignedLogDet = SignedLogDet {
        phase: ONE,
        log_magnitude: 0.0,
        zero: false,
    };

    pub const ZERO: SignedLogDet = SignedLogDet {
        phase: ONE,
        log_magnitude: f64::NEG_INFINITY,
        zero: true,
    };

    /// Converts a plain complex value.
    pub fn from_value(z: ComplexScalar) -> Self {
        let r = z.norm();
        if r == 0.0 {
            Self::ZERO
        } else {
            Self {
                phase: z / r,
                log_magnitude: r.ln(),
                zero: false,
            }
        }
    }

    /// `phase * exp(log_magnitude)`, which may overflow or underflow.
    pub fn value(&self) -> ComplexScalar {
        if self.zero {
            Complex64::new(0.0, 0.0)
        } else {
            self.phase * self.log_magnitude.exp()
        }
    }

    /// `|det|`, possibly overflowing to infinity.
    pub fn magnitude(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            self.log_magnitude.exp()
        }
    }

    pub fn mul(&self, other: &SignedLogDet) -> SignedLogDet {
        if self.zero || other.zero {
            return Self::ZERO;
        }
        let phase = self.phase * other.phase;
        SignedLogDet {
            phase: phase / phase.norm(),
            log_magnitude: self.log_magnitude + other.log_magnitude,
            zero: false,
        }
    }

    pub fn conj(&self) -> SignedLogDet {
        SignedLogDet {
            phase: self.phase.conj(),
            ..*self
        }
    }

    /// `|det|^2` as a signed-log value with unit phase.
    pub fn abs_squared(&self) -> SignedLogDet {
        if self.zero {
            return Self::ZERO;
        }
        SignedLogDet {
            phase: ONE,
            log_magnitude: 2.0 * self.log_magnitude,
            zero: false,
        }
    }
}

/// Determinant of a square matrix in signed-log form, by LU with partial
/// pivoting and the default singularity threshold.
pub fn log_det(a: &ComplexMatrix) -> Result<SignedLogDet> {
    log_det_with_threshold(a, DEFAULT_SINGULAR_THRESHOLD)
}

/// Like [`log_det`] with an explicit relative singularity threshold. A pivot
/// whose modulus is below `threshold` times the largest row infinity-norm of
/// the input flags the determinant as zero.
pub fn log_det_with_threshold(a: &ComplexMatrix, threshold: f64) -> Result<SignedLogDet> {
    a.require_square("log_det")?;
    let scale = a.max_abs();
    log_det_against_scale(a, threshold, scale)
}

/// LU determinant where pivots below `threshold * scale` flag a zero.
///
/// Lets callers supply a natural magnitude for the matrix instead of its
/// largest entry, e.g. 1 for products of orthonormal bases, whose entries can
/// all be rounding noise.
pub fn log_det_against_scale(
    a: &ComplexMatrix,
    threshold: f64,
    scale: f64,
) -> Result<SignedLogDet> {
    let n = a.require_square("log_det")?;
    if scale == 0.0 {
        return Ok(SignedLogDet::ZERO);
    }
    let cutoff = threshold * scale;

    let mut lu: Vec<ComplexScalar> = a.as_slice().to_vec();
    let mut phase = ONE;
    let mut log_magnitude = 0.0;

    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_abs = lu[k * n + k].norm();
        for i in k + 1..n {
            let v = lu[i * n + k].norm();
            if v > pivot_abs {
                pivot_abs = v;
                pivot_row = i;
            }
        }
        if pivot_abs < cutoff || pivot_abs == 0.0 {
            return Ok(SignedLogDet::ZERO);
        }
        if pivot_row != k {
            for j in 0..n {
                lu.swap(k * n + j, pivot_row * n + j);
            }
            phase = -phase;
        }
        let pivot = lu[k * n + k];
        phase *= pivot / pivot_abs;
        phase /= phase.norm();
        log_magnitude += pivot_abs.ln();

        for i in k + 1..n {
            let factor = lu[i * n + k] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = lu[k * n + j];
                lu[i * n + j] -= factor * u;
            }
        }
    }

    Ok(SignedLogDet {
        phase,
        log_magnitude,
        zero: false,
    })
}
