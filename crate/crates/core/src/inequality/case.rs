use std::fmt;
use std::str::FromStr;

use super::subspace::{maybe_whiten, require_same_shape, subspace_equal_with};
use super::Tolerances;
use crate::error::Result;
use crate::linalg::{estimate_rank, ComplexMatrix, HpdFactor};

/// Which clause of the determinantal Cauchy-Schwarz inequality an instance
/// `(A, B, M)` with `A, B` of shape `m x n` falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    /// `m < n`: every Gram matrix is singular, both sides are zero.
    WideEqualZero,
    /// `m = n`: the determinants factor and equality holds.
    SquareEqual,
    /// `m > n` and `A` or `B` lacks full column rank: both sides are zero.
    RankDeficientZero,
    /// `m > n`, full rank, identical column spaces: equality.
    FullRankSameSpan,
    /// `m > n`, full rank, different column spaces: strict inequality.
    FullRankStrict,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [
        CaseTag::WideEqualZero,
        CaseTag::SquareEqual,
        CaseTag::RankDeficientZero,
        CaseTag::FullRankSameSpan,
        CaseTag::FullRankStrict,
    ];

    /// Every tag except `FullRankStrict` comes with equality.
    pub fn implies_equality(self) -> bool {
        !matches!(self, CaseTag::FullRankStrict)
    }

    /// Cases where both sides vanish for rank reasons alone.
    pub fn is_structural_zero(self) -> bool {
        matches!(self, CaseTag::WideEqualZero | CaseTag::RankDeficientZero)
    }

    /// Cases where the determinantal correlation is defined and reported.
    pub fn has_correlation(self) -> bool {
        matches!(self, CaseTag::FullRankSameSpan | CaseTag::FullRankStrict)
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::WideEqualZero => "WideEqualZero",
            CaseTag::SquareEqual => "SquareEqual",
            CaseTag::RankDeficientZero => "RankDeficientZero",
            CaseTag::FullRankSameSpan => "FullRankSameSpan",
            CaseTag::FullRankStrict => "FullRankStrict",
        }
    }

    /// One-line statement of the clause the tag instantiates.
    pub fn clause(self) -> &'static str {
        match self {
            CaseTag::WideEqualZero => {
                "m < n: A*MA, B*MB and A*MB have rank at most m, so equality holds with both sides zero"
            }
            CaseTag::SquareEqual => {
                "m = n: det(A*MB) = conj(det A) det(M) det(B), so equality holds"
            }
            CaseTag::RankDeficientZero => {
                "m > n, rank(A) < n or rank(B) < n: equality holds with both sides zero"
            }
            CaseTag::FullRankSameSpan => {
                "m > n, rank(A) = rank(B) = n, equal column spaces: equality holds"
            }
            CaseTag::FullRankStrict => {
                "m > n, rank(A) = rank(B) = n, different column spaces: strict inequality"
            }
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CaseTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown case tag `{s}`"))
    }
}

/// Classifies already-whitened inputs. Also reports whether either input is
/// numerically rank deficient, which matters in the square case.
pub(crate) fn classify_whitened(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tols: &Tolerances,
) -> Result<(CaseTag, bool)> {
    require_same_shape("classify_case", a, b)?;
    let (m, n) = a.shape();
    if m < n {
        return Ok((CaseTag::WideEqualZero, true));
    }
    let deficient =
        estimate_rank(a, tols.rank) < n || estimate_rank(b, tols.rank) < n;
    if m == n {
        return Ok((CaseTag::SquareEqual, deficient));
    }
    if deficient {
        return Ok((CaseTag::RankDeficientZero, true));
    }
    let tag = if subspace_equal_with(a, b, tols.subspace, tols.rank)? {
        CaseTag::FullRankSameSpan
    } else {
        CaseTag::FullRankStrict
    };
    Ok((tag, false))
}

/// Case of `(a, b, weight)`; `subspace_tol` bounds `1 - cos` of the largest
/// principal angle for the spans to count as equal.
pub fn classify_case(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    weight: Option<&HpdFactor>,
    subspace_tol: f64,
) -> Result<CaseTag> {
    let tols = Tolerances {
        subspace: subspace_tol,
        ..Tolerances::default()
    };
    classify_case_with(a, b, weight, &tols)
}

pub fn classify_case_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    weight: Option<&HpdFactor>,
    tols: &Tolerances,
) -> Result<CaseTag> {
    tols.validate()?;
    require_same_shape("classify_case", a, b)?;
    let (wa, wb) = maybe_whiten(a, b, weight)?;
    Ok(classify_whitened(&wa, &wb, tols)?.0)
}
