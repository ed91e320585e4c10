use super::matrix::{ComplexMatrix, ComplexScalar, ONE, ZERO};
use crate::error::{Error, Result};

/// Relative threshold on pivoted-QR diagonals used when a caller does not
/// supply one.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Thin QR factorisation `a = q r` of a full-column-rank `m x n` matrix.
///
/// `q` has orthonormal columns, `r` is upper triangular with a real, strictly
/// positive diagonal, which makes the pair unique.
#[derive(Debug, Clone, PartialEq)]
pub struct QRFactors {
    q: ComplexMatrix,
    r: ComplexMatrix,
}

impl QRFactors {
    pub fn q(&self) -> &ComplexMatrix {
        &self.q
    }

    pub fn r(&self) -> &ComplexMatrix {
        &self.r
    }

    pub fn into_parts(self) -> (ComplexMatrix, ComplexMatrix) {
        (self.q, self.r)
    }
}

/// Householder triangularisation, optionally with column pivoting.
struct Householder {
    rows: usize,
    cols: usize,
    /// Row-major working copy; holds R in its upper triangle after `run`.
    work: Vec<ComplexScalar>,
    /// Unit reflector vectors, `reflectors[k]` acting on rows `k..rows`.
    /// Empty when step `k` needed no reflection.
    reflectors: Vec<Vec<ComplexScalar>>,
    perm: Vec<usize>,
}

impl Householder {
    fn run(a: &ComplexMatrix, pivot: bool) -> Self {
        let (m, n) = a.shape();
        let mut h = Householder {
            rows: m,
            cols: n,
            work: a.as_slice().to_vec(),
            reflectors: Vec::with_capacity(m.min(n)),
            perm: (0..n).collect(),
        };
        for k in 0..m.min(n) {
            if pivot {
                h.pivot_column(k);
            }
            let v = h.reflector_for(k);
            if !v.is_empty() {
                h.apply_reflector(&v, k);
            }
            h.reflectors.push(v);
        }
        h
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> ComplexScalar {
        self.work[i * self.cols + j]
    }

    fn pivot_column(&mut self, k: usize) {
        let tail_norm = |h: &Self, j: usize| -> f64 {
            (k..h.rows).map(|i| h.at(i, j).norm_sqr()).sum::<f64>()
        };
        let mut best = k;
        let mut best_norm = tail_norm(self, k);
        for j in k + 1..self.cols {
            let v = tail_norm(self, j);
            if v > best_norm {
                best = j;
                best_norm = v;
            }
        }
        if best != k {
            for i in 0..self.rows {
                self.work.swap(i * self.cols + k, i * self.cols + best);
            }
            self.perm.swap(k, best);
        }
    }

    /// Unit vector `v` such that `(I - 2 v v^*) x = beta e_1` for the tail `x`
    /// of column `k`, with `beta = -phase(x_0) * |x|`.
    fn reflector_for(&self, k: usize) -> Vec<ComplexScalar> {
        let x: Vec<ComplexScalar> = (k..self.rows).map(|i| self.at(i, k)).collect();
        if x.len() < 2 {
            return Vec::new();
        }
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if norm_x == 0.0 || tail == 0.0 {
            return Vec::new();
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let mut v = x;
        // v = x - beta e1 = x + phase * |x| e1; no cancellation in the first entry.
        v[0] += phase * norm_x;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= vnorm;
        }
        v
    }

    /// Applies `I - 2 v v^*` to rows `k..` of the working matrix, columns `k..`.
    fn apply_reflector(&mut self, v: &[ComplexScalar], k: usize) {
        let n = self.cols;
        for j in k..n {
            let mut dot = ZERO;
            for (t, &vi) in v.iter().enumerate() {
                dot += vi.conj() * self.work[(k + t) * n + j];
            }
            let s = dot * 2.0;
            for (t, &vi) in v.iter().enumerate() {
                self.work[(k + t) * n + j] -= vi * s;
            }
        }
        for i in k + 1..self.rows {
            self.work[i * n + k] = ZERO;
        }
    }

    fn diagonal_magnitudes(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols))
            .map(|k| self.at(k, k).norm())
            .collect()
    }

    /// Explicit thin Q (`rows x cols`), obtained by applying the reflectors
    /// to the leading columns of the identity in reverse order.
    fn thin_q(&self) -> ComplexMatrix {
        let (m, n) = (self.rows, self.cols);
        let mut q = ComplexMatrix::from_fn(m, n, |i, j| if i == j { ONE } else { ZERO });
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            if v.is_empty() {
                continue;
            }
            for j in 0..n {
                let mut dot = ZERO;
                for (t, &vi) in v.iter().enumerate() {
                    dot += vi.conj() * q[(k + t, j)];
                }
                let s = dot * 2.0;
                for (t, &vi) in v.iter().enumerate() {
                    q[(k + t, j)] -= vi * s;
                }
            }
        }
        q
    }
}

/// Numerical rank: the number of column-pivoted QR diagonal magnitudes above
/// `tol` times the largest one. The zero matrix has rank 0.
///
/// # Panics
///
/// Panics unless `tol` is positive and finite.
pub fn estimate_rank(a: &ComplexMatrix, tol: f64) -> usize {
    assert!(tol > 0.0 && tol.is_finite(), "rank tolerance must be positive");
    let h = Householder::run(a, true);
    let diag = h.diagonal_magnitudes();
    let largest = diag.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    diag.iter().filter(|&&d| d > tol * largest).count()
}

/// Thin QR with a positive real diagonal in `r`, using [`DEFAULT_RANK_TOL`].
pub fn qr_thin(a: &ComplexMatrix) -> Result<QRFactors> {
    qr_thin_with_tol(a, DEFAULT_RANK_TOL)
}

/// Thin QR, refusing inputs whose numerical rank at `rank_tol` is below the
/// column count.
pub fn qr_thin_with_tol(a: &ComplexMatrix, rank_tol: f64) -> Result<QRFactors> {
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::TooFewRows {
            op: "qr_thin",
            rows: m,
            cols: n,
        });
    }
    let rank = estimate_rank(a, rank_tol);
    if rank < n {
        return Err(Error::RankDeficient { rank, required: n });
    }

    let h = Householder::run(a, false);
    let mut q = h.thin_q();
    let mut r = ComplexMatrix::from_fn(n, n, |i, j| if j >= i { h.at(i, j) } else { ZERO });

    // Rescale so that diag(r) is real positive: a = (q D)(D^* r).
    for k in 0..n {
        let d = r[(k, k)];
        let mag = d.norm();
        let phase = d / mag;
        for j in k..n {
            r[(k, j)] *= phase.conj();
        }
        r[(k, k)] = ComplexScalar::new(mag, 0.0);
        for i in 0..m {
            q[(i, k)] *= phase;
        }
    }
    Ok(QRFactors { q, r })
}
