use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::linalg::{
    log_det_against_scale, qr_thin_with_tol, ComplexMatrix, HpdFactor, DEFAULT_RANK_TOL,
    DEFAULT_SINGULAR_THRESHOLD,
};
use crate::oracle;

/// Column orthonormality accepted by [`SubspaceBasis::new`].
pub const ORTHONORMAL_TOL: f64 = 1e-11;

/// Slack allowed above 1 for quantities bounded by 1 in exact arithmetic.
pub const UNIT_BOUND_SLACK: f64 = 1e-10;

/// An `m x n` matrix with orthonormal columns, spanning an `n`-dimensional
/// subspace of `C^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    ortho: ComplexMatrix,
}

impl SubspaceBasis {
    /// Wraps a matrix whose columns are already orthonormal.
    pub fn new(ortho: ComplexMatrix) -> Result<Self> {
        let deviation = ortho.adjoint_mul(&ortho)?.distance_to_identity();
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { ortho })
    }

    /// Orthonormal basis of the column space of a full-column-rank matrix.
    pub fn from_columns(a: &ComplexMatrix) -> Result<Self> {
        Self::from_columns_with_tol(a, DEFAULT_RANK_TOL)
    }

    pub fn from_columns_with_tol(a: &ComplexMatrix, rank_tol: f64) -> Result<Self> {
        let (q, _) = qr_thin_with_tol(a, rank_tol)?.into_parts();
        Ok(Self { ortho: q })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.ortho
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.ortho.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ortho.rows()
    }
}

pub(crate) fn require_same_shape(
    op: &'static str,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<()> {
    if a.shape() == b.shape() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            op,
            expected: format!("{}x{}", a.rows(), a.cols()),
            found: format!("{}x{}", b.rows(), b.cols()),
        })
    }
}

/// `(W a, W b)` when a weight is given, the inputs unchanged otherwise.
pub(crate) fn maybe_whiten<'a>(
    a: &'a ComplexMatrix,
    b: &'a ComplexMatrix,
    weight: Option<&HpdFactor>,
) -> Result<(Cow<'a, ComplexMatrix>, Cow<'a, ComplexMatrix>)> {
    match weight {
        Some(w) => Ok((Cow::Owned(w.whiten(a)?), Cow::Owned(w.whiten(b)?))),
        None => Ok((Cow::Borrowed(a), Cow::Borrowed(b))),
    }
}

/// `|det(Q_A^* Q_B)|` before clamping. Expects already whitened inputs.
pub(crate) fn correlation_unclamped(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rank_tol: f64,
) -> Result<f64> {
    require_same_shape("det_correlation", a, b)?;
    let (m, n) = a.shape();
    if m <= n {
        return Err(Error::WrongRegime { rows: m, cols: n });
    }
    let qa = SubspaceBasis::from_columns_with_tol(a, rank_tol)?;
    let qb = SubspaceBasis::from_columns_with_tol(b, rank_tol)?;
    let cross = qa.matrix().adjoint_mul(qb.matrix())?;
    // Entries of Q_A^* Q_B are bounded by 1, which is the reference scale.
    Ok(log_det_against_scale(&cross, DEFAULT_SINGULAR_THRESHOLD, 1.0)?.magnitude())
}

pub(crate) fn clamp_correlation(raw: f64) -> Result<f64> {
    if !(raw <= 1.0 + UNIT_BOUND_SLACK) {
        return Err(Error::BoundViolation {
            what: "determinantal correlation",
            value: raw,
            limit: 1.0 + UNIT_BOUND_SLACK,
        });
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// `|det(Q_A^* Q_B)|` for the thin-QR orthonormal factors of `a` and `b`
/// (after whitening by `weight`), without clamping.
///
/// This is the product of the cosines of the principal angles between the
/// two column spaces.
pub fn det_correlation_raw(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    weight: Option<&HpdFactor>,
) -> Result<f64> {
    let (wa, wb) = maybe_whiten(a, b, weight)?;
    correlation_unclamped(&wa, &wb, DEFAULT_RANK_TOL)
}

/// Determinantal correlation between the column spaces of `a` and `b` under
/// the inner product `x^* M y` (the standard one when `weight` is `None`).
///
/// Lies in `[0, 1]` and equals 1 exactly when the column spaces coincide.
/// Requires `m > n` and full column rank. A raw value above
/// `1 + UNIT_BOUND_SLACK` is reported as a [`Error::BoundViolation`].
pub fn det_correlation(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    weight: Option<&HpdFactor>,
) -> Result<f64> {
    clamp_correlation(det_correlation_raw(a, b, weight)?)
}

/// Norms of the columns of `W = U^* V`. Each is the length of the projection
/// of the corresponding column of `V` onto the span of `U`, hence at most 1.
pub fn column_norm_profile(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<Vec<f64>> {
    require_same_shape("column_norm_profile", u.matrix(), v.matrix())?;
    let (m, n) = u.matrix().shape();
    if m <= n {
        return Err(Error::WrongRegime { rows: m, cols: n });
    }
    let w = u.matrix().adjoint_mul(v.matrix())?;
    let profile: Vec<f64> = (0..n).map(|j| w.column_norm(j)).collect();
    if let Some(&worst) = profile.iter().find(|&&x| x > 1.0 + UNIT_BOUND_SLACK) {
        return Err(Error::BoundViolation {
            what: "projected column norm",
            value: worst,
            limit: 1.0 + UNIT_BOUND_SLACK,
        });
    }
    Ok(profile)
}

/// Whether `a` and `b` have the same column space: every principal-angle
/// cosine is at least `1 - tol`.
pub fn subspace_equal(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<bool> {
    subspace_equal_with(a, b, tol, DEFAULT_RANK_TOL)
}

pub(crate) fn subspace_equal_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
    rank_tol: f64,
) -> Result<bool> {
    require_same_shape("subspace_equal", a, b)?;
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::TooFewRows {
            op: "subspace_equal",
            rows: m,
            cols: n,
        });
    }
    let qa = SubspaceBasis::from_columns_with_tol(a, rank_tol)?;
    let qb = SubspaceBasis::from_columns_with_tol(b, rank_tol)?;
    let angles = oracle::cosines_between(qa.matrix(), qb.matrix())?;
    Ok(angles.smallest() >= 1.0 - tol)
}
