//! Slow, independent reference implementations.
//!
//! Nothing in here shares code paths with the LU, QR or Cholesky kernels:
//! determinants come from Laplace expansion, products from a plain triple
//! loop, and singular values from cyclic Jacobi on a hermitian Gram matrix.
//! The determinant oracle refuses matrices larger than [`MAX_ORACLE_DIM`].

use num_complex::Complex64;

use crate::ensembles::{ginibre, trial_rng};
use crate::error::{Error, Result};
use crate::inequality::SubspaceBasis;
use crate::linalg::{ComplexMatrix, ComplexScalar, ZERO};

/// Largest dimension accepted by [`det_cofactor`].
pub const MAX_ORACLE_DIM: usize = 6;

/// Jacobi stops once every off-diagonal modulus is below this times the trace.
pub const JACOBI_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 100;

/// Trials attempted by [`find_bilinearity_counterexample`].
pub const BILINEARITY_SEARCH_TRIALS: usize = 1000;

/// Discrepancy a counterexample must exceed.
pub const BILINEARITY_THRESHOLD: f64 = 0.1;

const BILINEARITY_STREAM: u64 = 0xb111;

/// Plain `(i, j, k)` triple loop.
pub fn naive_matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch {
            op: "naive_matmul",
            expected: format!("{} rows in right operand", a.cols()),
            found: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    Ok(ComplexMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut s = ZERO;
        for k in 0..a.cols() {
            s += a[(i, k)] * b[(k, j)];
        }
        s
    }))
}

/// Determinant by Laplace expansion along the first row.
pub fn det_cofactor(a: &ComplexMatrix) -> Result<ComplexScalar> {
    let n = a.require_square("det_cofactor")?;
    if n > MAX_ORACLE_DIM {
        return Err(Error::OracleScale {
            n,
            limit: MAX_ORACLE_DIM,
        });
    }
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    Ok(laplace(a, &rows, &cols))
}

fn laplace(a: &ComplexMatrix, rows: &[usize], cols: &[usize]) -> ComplexScalar {
    match cols.len() {
        1 => a[(rows[0], cols[0])],
        2 => {
            a[(rows[0], cols[0])] * a[(rows[1], cols[1])]
                - a[(rows[0], cols[1])] * a[(rows[1], cols[0])]
        }
        _ => {
            let mut total = ZERO;
            let sub_rows = &rows[1..];
            for (k, &c) in cols.iter().enumerate() {
                let entry = a[(rows[0], c)];
                if entry == ZERO {
                    continue;
                }
                let minor_cols: Vec<usize> =
                    cols.iter().copied().filter(|&x| x != c).collect();
                let term = entry * laplace(a, sub_rows, &minor_cols);
                if k % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

/// Result of a cyclic Jacobi run on a hermitian matrix.
#[derive(Debug, Clone)]
pub struct JacobiOutcome {
    /// Eigenvalues in diagonal order (unsorted).
    pub eigenvalues: Vec<f64>,
    /// Off-diagonal Frobenius norm before the first sweep and after each sweep.
    pub off_norm_history: Vec<f64>,
    pub converged: bool,
}

fn off_diagonal_norm(h: &ComplexMatrix) -> f64 {
    let n = h.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += h[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigenvalues of a hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_jacobi(h: &ComplexMatrix) -> Result<JacobiOutcome> {
    let n = h.require_square("hermitian_jacobi")?;
    let mut a = h.clone();
    let scale: f64 = (0..n).map(|i| a[(i, i)].re.abs()).sum();
    let cutoff = JACOBI_TOL * scale;
    let mut history = vec![off_diagonal_norm(&a)];

    let settled = |a: &ComplexMatrix| {
        (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)].norm() <= cutoff))
    };

    let mut converged = settled(&a);
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
        history.push(off_diagonal_norm(&a));
        converged = settled(&a);
    }

    Ok(JacobiOutcome {
        eigenvalues: (0..n).map(|i| a[(i, i)].re).collect(),
        off_norm_history: history,
        converged,
    })
}

/// One rotation annihilating `a[p][q]`: `a <- J^* a J` with
/// `J = diag(1, conj(e)) R`, where `e` is the phase of `a[p][q]` and `R` the
/// real Jacobi rotation.
fn rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let e = apq / mag;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -e.conj() * s;
    let j_qq = e.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

/// Singular values of `a`, descending, as square roots of the eigenvalues
/// of `a^* a`.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = naive_matmul(&a.conj_transpose(), a)?;
    let mut sv: Vec<f64> = hermitian_jacobi(&gram)?
        .eigenvalues
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// 2-norm condition number (ratio of extreme singular values); infinite
/// when the smallest one is zero.
pub fn condition_number(a: &ComplexMatrix) -> Result<f64> {
    let sv = singular_values(a)?;
    let smallest = *sv.last().expect("non-empty");
    Ok(if smallest == 0.0 {
        f64::INFINITY
    } else {
        sv[0] / smallest
    })
}

/// Cosines of the principal angles between two subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngles {
    /// Sorted descending.
    pub cosines: Vec<f64>,
}

impl PrincipalAngles {
    pub fn product(&self) -> f64 {
        self.cosines.iter().product()
    }

    pub fn smallest(&self) -> f64 {
        self.cosines.last().copied().unwrap_or(1.0)
    }
}

/// Principal-angle cosines between the spans of two orthonormal bases of
/// equal shape `m x n` with `m > n`.
pub fn principal_angle_cosines(qa: &SubspaceBasis, qb: &SubspaceBasis) -> Result<PrincipalAngles> {
    let (m, n) = qa.matrix().shape();
    if qb.matrix().shape() != (m, n) {
        return Err(Error::DimensionMismatch {
            op: "principal_angle_cosines",
            expected: format!("{m}x{n}"),
            found: format!("{}x{}", qb.matrix().rows(), qb.matrix().cols()),
        });
    }
    if m <= n {
        return Err(Error::WrongRegime { rows: m, cols: n });
    }
    cosines_between(qa.matrix(), qb.matrix())
}

/// Singular values of `qa^* qb` through Jacobi on `(qa^* qb)^* (qa^* qb)`.
pub(crate) fn cosines_between(qa: &ComplexMatrix, qb: &ComplexMatrix) -> Result<PrincipalAngles> {
    let cross = naive_matmul(&qa.conj_transpose(), qb)?;
    let mut cosines = singular_values(&cross)?;
    if let Some(&c) = cosines.first() {
        if c > 1.0 + 1e-10 {
            return Err(Error::BoundViolation {
                what: "principal angle cosine",
                value: c,
                limit: 1.0 + 1e-10,
            });
        }
    }
    cosines.iter_mut().for_each(|c| *c = c.min(1.0 + 1e-10));
    Ok(PrincipalAngles { cosines })
}

/// `|det((a1 + a2)^* b) - det(a1^* b) - det(a2^* b)|`, all determinants by
/// cofactor expansion.
pub fn bilinearity_discrepancy(
    a1: &ComplexMatrix,
    a2: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<f64> {
    let sum = a1.add(a2)?;
    let det_of = |x: &ComplexMatrix| -> Result<ComplexScalar> {
        det_cofactor(&naive_matmul(&x.conj_transpose(), b)?)
    };
    Ok((det_of(&sum)? - det_of(a1)? - det_of(a2)?).norm())
}

/// A triple on which the determinant of the cross product fails to be
/// additive in its first argument.
#[derive(Debug, Clone)]
pub struct BilinearityWitness {
    pub a1: ComplexMatrix,
    pub a2: ComplexMatrix,
    pub b: ComplexMatrix,
    pub discrepancy: f64,
    /// Index of the trial that produced the witness.
    pub trial: usize,
}

/// Random search over square Ginibre triples of size 2 to 4 for a
/// discrepancy above [`BILINEARITY_THRESHOLD`]. Size 1 is skipped: scalar
/// determinants are linear.
pub fn find_bilinearity_counterexample(seed: u64) -> Result<BilinearityWitness> {
    for trial in 0..BILINEARITY_SEARCH_TRIALS {
        let mut rng = trial_rng(seed, BILINEARITY_STREAM, trial as u64);
        let n = 2 + (rand::Rng::random_range(&mut rng, 0..3usize));
        let a1 = ginibre(&mut rng, n, n);
        let a2 = ginibre(&mut rng, n, n);
        let b = ginibre(&mut rng, n, n);
        let discrepancy = bilinearity_discrepancy(&a1, &a2, &b)?;
        if discrepancy > BILINEARITY_THRESHOLD {
            return Ok(BilinearityWitness {
                a1,
                a2,
                b,
                discrepancy,
                trial,
            });
        }
    }
    Err(Error::SearchExhausted {
        trials: BILINEARITY_SEARCH_TRIALS,
    })
}
