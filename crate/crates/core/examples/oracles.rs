// Cross-checks against brute-force references: LU determinant vs cofactor
// expansion, Hadamard's bound, and a witness that det(A* B) is not additive
// in A.
//
//     cargo run --example oracles

use detcs::ensembles::{ginibre, trial_rng};
use detcs::oracle::{det_cofactor, find_bilinearity_counterexample, naive_matmul};
use detcs::{hadamard_bound, log_det};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = trial_rng(9, 0, 0);
    for n in 1..=5 {
        let a = ginibre(&mut rng, n, n);
        let lu = log_det(&a)?;
        let exact = det_cofactor(&a)?;
        let rel = (lu.value() - exact).norm() / exact.norm();
        let h = hadamard_bound(&a)?;
        println!("n={n}  |det|={:.6e}  rel err={rel:.1e}  hadamard={:.6e}", h.det_mag, h.bound);
        assert!(rel < 1e-12);
        assert!(h.det_mag <= h.bound);
    }

    let x = ginibre(&mut rng, 4, 3);
    let y = ginibre(&mut rng, 3, 2);
    assert_eq!(naive_matmul(&x, &y)?.shape(), (4, 2));

    let w = find_bilinearity_counterexample(42)?;
    println!(
        "non-additivity witness: n={} trial={} |det((A1+A2)*B) - det(A1*B) - det(A2*B)| = {:.4}",
        w.a1.rows(),
        w.trial,
        w.discrepancy
    );
    assert!(w.discrepancy > 0.1);
    Ok(())
}
