use super::case::{classify_whitened, CaseTag};
use super::subspace::{clamp_correlation, correlation_unclamped, maybe_whiten, require_same_shape};
use crate::error::{Error, Result};
use crate::linalg::{
    log_det, log_det_against_scale, ComplexMatrix, HpdFactor, SignedLogDet, DEFAULT_RANK_TOL,
    DEFAULT_SINGULAR_THRESHOLD,
};

/// Default relative tolerance for the equality verdict and the inequality check.
pub const DEFAULT_EQUALITY_TOL: f64 = 1e-9;

/// Default tolerance on principal-angle cosines for equal column spaces.
pub const DEFAULT_SUBSPACE_TOL: f64 = 1e-8;

/// Tolerances used by classification and verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative slack for `lhs <= rhs` and the bound `relative_gap <= equality`
    /// on equality verdicts.
    pub equality: f64,
    /// Column spaces are equal when every principal-angle cosine is at
    /// least `1 - subspace`.
    pub subspace: f64,
    /// Relative threshold for numerical rank.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equality: DEFAULT_EQUALITY_TOL,
            subspace: DEFAULT_SUBSPACE_TOL,
            rank: DEFAULT_RANK_TOL,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for t in [self.equality, self.subspace, self.rank] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidTolerance(t));
            }
        }
        Ok(())
    }
}

/// `A^* M B`, computed as `(W A)^* (W B)` when a weight is given and as
/// `A^* B` otherwise.
pub fn gram(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    weight: Option<&HpdFactor>,
) -> Result<ComplexMatrix> {
    require_same_shape("gram", a, b)?;
    let (wa, wb) = maybe_whiten(a, b, weight)?;
    wa.adjoint_mul(&wb)
}

/// `(W a, W b)`, which turns the weighted problem into an unweighted one
/// with identical Gram products.
pub fn whitened_pair(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    weight: &HpdFactor,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    require_same_shape("whitened_pair", a, b)?;
    Ok((weight.whiten(a)?, weight.whiten(b)?))
}

/// Hadamard's bound for a square matrix next to its actual determinant modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardBound {
    /// Product of the column norms.
    pub bound: f64,
    /// `|det h|`.
    pub det_mag: f64,
}

/// `|det h| <= prod_j |h_j|`. Fails with [`Error::BoundViolation`] if the
/// computed determinant exceeds the bound by more than a relative `1e-10`.
pub fn hadamard_bound(h: &ComplexMatrix) -> Result<HadamardBound> {
    let n = h.require_square("hadamard_bound")?;
    let bound: f64 = (0..n).map(|j| h.column_norm(j)).product();
    let det_mag = log_det(h)?.magnitude();
    if det_mag > bound * (1.0 + 1e-10) {
        return Err(Error::BoundViolation {
            what: "|det| against Hadamard bound",
            value: det_mag,
            limit: bound,
        });
    }
    Ok(HadamardBound { bound, det_mag })
}

/// Outcome of checking `|det(A^* M B)|^2 <= det(A^* M A) det(B^* M B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsReport {
    pub case_tag: CaseTag,
    /// `|det(A^* M B)|^2`.
    pub lhs_log: SignedLogDet,
    /// `det(A^* M A) det(B^* M B)`.
    pub rhs_log: SignedLogDet,
    /// Determinantal correlation; present only for the full-rank `m > n` cases.
    pub correlation: Option<f64>,
    /// `1 - lhs / rhs`, zero when both sides vanish.
    pub relative_gap: f64,
    pub equality: bool,
    pub tol_used: f64,
    pub subspace_tol_used: f64,
}

impl CsReport {
    /// `log(lhs) - log(rhs)`, or `None` when either side is zero.
    pub fn log_slack(&self) -> Option<f64> {
        if self.lhs_log.zero || self.rhs_log.zero {
            None
        } else {
            Some(self.lhs_log.log_magnitude - self.rhs_log.log_magnitude)
        }
    }

    /// Contract breaches of this report, empty when it is self-consistent.
    pub fn invariant_breaches(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.equality != self.case_tag.implies_equality() {
            out.push(format!(
                "equality verdict {} disagrees with case {}",
                self.equality, self.case_tag
            ));
        }
        if self.equality && !(self.relative_gap <= self.tol_used) {
            out.push(format!(
                "equality reported with relative gap {:e} above tolerance {:e}",
                self.relative_gap, self.tol_used
            ));
        }
        if self.correlation.is_some() != self.case_tag.has_correlation() {
            out.push(format!("correlation presence wrong for case {}", self.case_tag));
        }
        if let Some(c) = self.correlation {
            if !(0.0..=1.0).contains(&c) {
                out.push(format!("correlation {c} outside [0, 1]"));
            }
        }
        if self.case_tag.is_structural_zero() && !(self.lhs_log.zero && self.rhs_log.zero) {
            out.push(format!("case {} needs both sides zero", self.case_tag));
        }
        if !self.lhs_log.zero && self.rhs_log.zero {
            out.push("nonzero lhs against zero rhs".to_string());
        }
        if let Some(slack) = self.log_slack() {
            if slack > self.tol_used.ln_1p() {
                out.push(format!("log lhs exceeds log rhs by {slack:e}"));
            }
        }
        if !(self.relative_gap >= 0.0 && self.relative_gap <= 1.0) {
            out.push(format!("relative gap {} outside [0, 1]", self.relative_gap));
        }
        out
    }
}

/// Checks the inequality with default subspace and rank tolerances and
/// equality tolerance `tol`.
pub fn verify_inequality(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    weight: Option<&HpdFactor>,
    tol: f64,
) -> Result<CsReport> {
    let tols = Tolerances {
        equality: tol,
        ..Tolerances::default()
    };
    verify_inequality_with(a, b, weight, &tols)
}

/// Checks `|det(A^* M B)|^2 <= det(A^* M A) det(B^* M B)` in the log domain.
///
/// The vanishing cases are decided from shape and rank, not from the size
/// of the computed determinants. Returns [`Error::InequalityViolation`] if
/// the computed left side exceeds the right side by more than a relative
/// `tols.equality`; mathematically that cannot happen, so it points at a
/// numerical failure.
pub fn verify_inequality_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    weight: Option<&HpdFactor>,
    tols: &Tolerances,
) -> Result<CsReport> {
    tols.validate()?;
    require_same_shape("verify_inequality", a, b)?;
    let (wa, wb) = maybe_whiten(a, b, weight)?;
    let (case_tag, both_vanish) = classify_whitened(&wa, &wb, tols)?;

    let (lhs_log, rhs_log) = if both_vanish {
        (SignedLogDet::ZERO, SignedLogDet::ZERO)
    } else {
        // |a_i^* b_j| <= |a_i| |b_j| bounds every entry of A^* B; measuring
        // pivots against that keeps orthogonal spans from producing noise.
        let col_max = |x: &ComplexMatrix| (0..x.cols()).map(|j| x.column_norm(j)).fold(0.0, f64::max);
        let cross = log_det_against_scale(
            &wa.adjoint_mul(&wb)?,
            DEFAULT_SINGULAR_THRESHOLD,
            col_max(&wa) * col_max(&wb),
        )?;
        let own_a = log_det(&wa.adjoint_mul(&wa)?)?;
        let own_b = log_det(&wb.adjoint_mul(&wb)?)?;
        (cross.abs_squared(), own_a.mul(&own_b))
    };

    let violation = || Error::InequalityViolation {
        case: case_tag,
        lhs_log: lhs_log.log_magnitude,
        rhs_log: rhs_log.log_magnitude,
    };
    let relative_gap = match (lhs_log.zero, rhs_log.zero) {
        (true, true) => 0.0,
        (true, false) => 1.0,
        (false, true) => return Err(violation()),
        (false, false) => {
            let slack = lhs_log.log_magnitude - rhs_log.log_magnitude;
            if slack > tols.equality.ln_1p() {
                return Err(violation());
            }
            // Rounding can leave lhs marginally above rhs; the gap is
            // reported as zero then.
            (-slack.exp_m1()).max(0.0)
        }
    };

    let correlation = if case_tag.has_correlation() {
        Some(clamp_correlation(correlation_unclamped(&wa, &wb, tols.rank)?)?)
    } else {
        None
    };

    Ok(CsReport {
        case_tag,
        lhs_log,
        rhs_log,
        correlation,
        relative_gap,
        equality: case_tag.implies_equality(),
        tol_used: tols.equality,
        subspace_tol_used: tols.subspace,
    })
}
