use detcs::ensembles::{ginibre, random_unitary, trial_rng};
use detcs::inequality::{det_correlation_raw, DEFAULT_SUBSPACE_TOL, UNIT_BOUND_SLACK};
use detcs::oracle::{condition_number, det_cofactor, hermitian_jacobi, naive_matmul};
use detcs::{
    cholesky_hpd, column_norm_profile, conj_transpose, det_correlation, estimate_rank, log_det,
    matmul, qr_thin, subspace_equal, verify_inequality, CaseTag, ComplexMatrix, ComplexScalar,
    SubspaceBasis,
};
use proptest::prelude::*;

fn pair(seed: u64, m: usize, n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let mut rng = trial_rng(seed, 0, 0);
    (ginibre(&mut rng, m, n), ginibre(&mut rng, m, n))
}

fn well_conditioned(seed: u64, n: usize, limit: f64) -> ComplexMatrix {
    (0..)
        .map(|i| ginibre(&mut trial_rng(seed, 1, i), n, n))
        .find(|c| condition_number(c).unwrap() < limit)
        .unwrap()
}

fn tall() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=6).prop_flat_map(|n| (n + 1..=10, Just(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn adjoint_reverses_products(seed: u64, m in 1usize..7, k in 1usize..7, n in 1usize..7) {
        let mut rng = trial_rng(seed, 0, 0);
        let a = ginibre(&mut rng, m, k);
        let b = ginibre(&mut rng, k, n);
        let left = conj_transpose(&matmul(&a, &b).unwrap());
        let right = matmul(&conj_transpose(&b), &conj_transpose(&a)).unwrap();
        let scale = a.max_abs() * b.max_abs() * k as f64;
        for (x, y) in left.as_slice().iter().zip(right.as_slice()) {
            prop_assert!((x - y).norm() <= 1e-13 * scale);
        }
    }

    #[test]
    fn matmul_matches_triple_loop(seed: u64, m in 1usize..9, k in 1usize..9, n in 1usize..9) {
        let mut rng = trial_rng(seed, 0, 0);
        let a = ginibre(&mut rng, m, k);
        let b = ginibre(&mut rng, k, n);
        let diff = a.matmul(&b).unwrap().sub(&naive_matmul(&a, &b).unwrap()).unwrap();
        prop_assert!(diff.max_abs() <= 1e-14 * a.max_abs() * b.max_abs() * k as f64);
    }

    #[test]
    fn log_det_is_multiplicative(seed: u64, n in 1usize..=6) {
        let a = well_conditioned(seed, n, 1e4);
        let b = well_conditioned(seed ^ 0x5555, n, 1e4);
        let da = log_det(&a).unwrap();
        let db = log_det(&b).unwrap();
        let dab = log_det(&a.matmul(&b).unwrap()).unwrap();
        prop_assert!((dab.log_magnitude - da.log_magnitude - db.log_magnitude).abs() <= 1e-9);
        prop_assert!((dab.phase - da.phase * db.phase).norm() <= 1e-9);
    }

    #[test]
    fn log_det_of_adjoint_is_conjugate(seed: u64, n in 1usize..=8) {
        let a = ginibre(&mut trial_rng(seed, 0, 0), n, n);
        let d = log_det(&a).unwrap();
        let dh = log_det(&a.conj_transpose()).unwrap();
        prop_assert!((d.log_magnitude - dh.log_magnitude).abs() <= 1e-12);
        prop_assert!((d.phase.conj() - dh.phase).norm() <= 1e-12);
    }

    #[test]
    fn log_det_matches_cofactor(seed: u64, n in 1usize..=5) {
        let a = well_conditioned(seed, n, 1e6);
        let exact = det_cofactor(&a).unwrap();
        let lu = log_det(&a).unwrap().value();
        prop_assert!((lu - exact).norm() <= 1e-10 * exact.norm());
    }

    #[test]
    fn qr_reconstructs(seed: u64, m in 1usize..=64, n_frac in 0.0f64..1.0) {
        let n = 1 + ((m - 1) as f64 * n_frac) as usize;
        let a = ginibre(&mut trial_rng(seed, 0, 0), m, n);
        let f = qr_thin(&a).unwrap();
        let recon = f.q().matmul(f.r()).unwrap().sub(&a).unwrap();
        prop_assert!(recon.frobenius_norm() <= 1e-11 * a.frobenius_norm());
        let gram = f.q().adjoint_mul(f.q()).unwrap().sub(&ComplexMatrix::identity(n)).unwrap();
        prop_assert!(gram.frobenius_norm() <= 1e-11);
        for i in 0..n {
            prop_assert!(f.r()[(i, i)].im == 0.0 && f.r()[(i, i)].re > 0.0);
            for j in 0..i {
                prop_assert_eq!(f.r()[(i, j)], ComplexScalar::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn cholesky_reconstructs_ill_conditioned(seed: u64, n in 1usize..=8, log_cond in 0.0f64..8.0) {
        let mut rng = trial_rng(seed, 0, 0);
        let u = random_unitary(&mut rng, n);
        let eig: Vec<ComplexScalar> = (0..n)
            .map(|i| {
                let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                ComplexScalar::new(10f64.powf(log_cond * t), 0.0)
            })
            .collect();
        let raw = u.matmul(&ComplexMatrix::from_diagonal(&eig)).unwrap().matmul(&u.conj_transpose()).unwrap();
        let m = raw.add(&raw.conj_transpose()).unwrap().scale(ComplexScalar::new(0.5, 0.0));
        let w = cholesky_hpd(&m).unwrap();
        let back = w.w_factor().adjoint_mul(w.w_factor()).unwrap().sub(&m).unwrap();
        prop_assert!(back.frobenius_norm() <= 1e-11 * m.frobenius_norm());
    }

    #[test]
    fn rank_is_invariant_under_right_mixing(seed: u64, m in 1usize..=8, n in 1usize..=6, r in 0usize..=6) {
        let mut rng = trial_rng(seed, 0, 0);
        let r = r.min(m).min(n);
        let a = detcs::ensembles::low_rank(&mut rng, m, n, r);
        let c = well_conditioned(seed, n, 1e4);
        prop_assert_eq!(estimate_rank(&a.matmul(&c).unwrap(), 1e-10), estimate_rank(&a, 1e-10));
    }

    #[test]
    fn correlation_obeys_unit_bound((m, n) in tall(), seed: u64) {
        let (a, b) = pair(seed, m, n);
        let raw = det_correlation_raw(&a, &b, None).unwrap();
        prop_assert!((0.0..=1.0 + UNIT_BOUND_SLACK).contains(&raw));
        let profile = column_norm_profile(
            &SubspaceBasis::from_columns(&a).unwrap(),
            &SubspaceBasis::from_columns(&b).unwrap(),
        ).unwrap();
        prop_assert!(profile.iter().all(|&x| x <= 1.0 + UNIT_BOUND_SLACK));
    }

    #[test]
    fn distinct_spans_are_strict((m, n) in tall(), seed: u64) {
        let (a, b) = pair(seed, m, n);
        if !subspace_equal(&a, &b, DEFAULT_SUBSPACE_TOL).unwrap() {
            prop_assert!(det_correlation(&a, &b, None).unwrap() < 1.0 - 1e-12);
            let r = verify_inequality(&a, &b, None, 1e-9).unwrap();
            prop_assert_eq!(r.case_tag, CaseTag::FullRankStrict);
            prop_assert!(!r.equality);
        }
    }

    #[test]
    fn shared_span_attains_equality((m, n) in tall(), seed: u64) {
        let (a, _) = pair(seed, m, n);
        let c = well_conditioned(seed, n, 1e4);
        let b = a.matmul(&c).unwrap();
        prop_assert!((det_correlation(&a, &b, None).unwrap() - 1.0).abs() <= 1e-10);
        let r = verify_inequality(&a, &b, None, 1e-9).unwrap();
        prop_assert_eq!(r.case_tag, CaseTag::FullRankSameSpan);
        prop_assert!(r.equality);
    }

    #[test]
    fn correlation_is_unitarily_invariant((m, n) in tall(), seed: u64) {
        let (a, b) = pair(seed, m, n);
        let p = random_unitary(&mut trial_rng(seed, 2, 0), m);
        let before = det_correlation(&a, &b, None).unwrap();
        let after = det_correlation(&p.matmul(&a).unwrap(), &p.matmul(&b).unwrap(), None).unwrap();
        prop_assert!((before - after).abs() <= 1e-10);
    }

    #[test]
    fn right_mixing_keeps_case_and_verdict(seed: u64, m in 1usize..=8, n in 1usize..=6) {
        let (a, b) = pair(seed, m, n);
        let c = well_conditioned(seed, n, 1e4);
        let r = verify_inequality(&a, &b, None, 1e-9).unwrap();
        let rc = verify_inequality(&a.matmul(&c).unwrap(), &b, None, 1e-9).unwrap();
        prop_assert_eq!(r.case_tag, rc.case_tag);
        prop_assert_eq!(r.equality, rc.equality);
    }

    #[test]
    fn jacobi_off_diagonal_mass_decreases(seed: u64, n in 1usize..=8) {
        let g = ginibre(&mut trial_rng(seed, 0, 0), n + 2, n);
        let h = g.adjoint_mul(&g).unwrap();
        let out = hermitian_jacobi(&h).unwrap();
        prop_assert!(out.converged);
        for w in out.off_norm_history.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        let trace: f64 = (0..n).map(|i| h[(i, i)].re).sum();
        prop_assert!((out.eigenvalues.iter().sum::<f64>() - trace).abs() <= 1e-10 * trace);
    }
}
