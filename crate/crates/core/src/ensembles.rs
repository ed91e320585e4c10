//! Seeded random matrix ensembles.
//!
//! Every generator takes an explicit RNG; [`trial_rng`] derives independent
//! per-trial streams from a master seed so runs are reproducible and trials
//! can be evaluated in any order.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, ComplexScalar};

/// Regularisation added to `G^* G` in [`random_hpd`].
pub const HPD_EPSILON: f64 = 1e-3;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// RNG for trial `index` of stream `stream` under `seed`.
pub fn trial_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let key = splitmix64(seed ^ splitmix64(stream.wrapping_mul(0x2545_f491_4f6c_dd1d) ^ splitmix64(index)));
    ChaCha8Rng::seed_from_u64(key)
}

/// Standard complex normal: real and imaginary parts independent N(0, 1/2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> ComplexScalar {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Ginibre matrix: i.i.d. standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// `rows x cols` matrix of rank at most `rank`, as a product of thin Ginibre
/// factors. Rank zero yields the zero matrix.
pub fn low_rank<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    rank: usize,
) -> ComplexMatrix {
    if rank == 0 {
        return ComplexMatrix::zeros(rows, cols);
    }
    let left = ginibre(rng, rows, rank);
    let right = ginibre(rng, rank, cols);
    left.matmul(&right).expect("conformable thin factors")
}

/// `G^* G + eps I` for a Ginibre `G`.
pub fn random_hpd<R: Rng + ?Sized>(rng: &mut R, dim: usize, eps: f64) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let mut m = g.adjoint_mul(&g).expect("square");
    for i in 0..dim {
        m[(i, i)] += Complex64::new(eps, 0.0);
        // exact hermitian diagonal
        m[(i, i)].im = 0.0;
    }
    for i in 0..dim {
        for j in 0..i {
            m[(i, j)] = m[(j, i)].conj();
        }
    }
    m
}

/// Haar-distributed unitary matrix (QR of a Ginibre matrix with the
/// diagonal of R made positive).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    loop {
        let g = ginibre(rng, dim, dim);
        if let Ok(f) = crate::linalg::qr_thin(&g) {
            return f.into_parts().0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cholesky_hpd, estimate_rank};

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = ginibre(&mut trial_rng(7, 0, 3), 2, 2);
        let b = ginibre(&mut trial_rng(7, 0, 3), 2, 2);
        let c = ginibre(&mut trial_rng(7, 0, 4), 2, 2);
        let d = ginibre(&mut trial_rng(7, 1, 3), 2, 2);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn low_rank_has_requested_rank() {
        let mut rng = trial_rng(1, 0, 0);
        for rank in 0..4 {
            let a = low_rank(&mut rng, 6, 4, rank);
            assert_eq!(estimate_rank(&a, 1e-10), rank);
        }
    }

    #[test]
    fn hpd_sample_factors() {
        let mut rng = trial_rng(2, 0, 0);
        let m = random_hpd(&mut rng, 5, HPD_EPSILON);
        assert!(cholesky_hpd(&m).is_ok());
    }

    #[test]
    fn unitary_sample_is_unitary() {
        let u = random_unitary(&mut trial_rng(3, 0, 0), 4);
        let g = u.adjoint_mul(&u).unwrap();
        assert!(g.sub(&ComplexMatrix::identity(4)).unwrap().frobenius_norm() < 1e-13);
    }
}
