// The inequality under a weighted inner product x* M y. Whitening with the
// Cholesky factor W (W* W = M) reduces it to the standard one.
//
//     cargo run --example weighted_inner_product

use detcs::ensembles::{ginibre, random_hpd, trial_rng};
use detcs::{cholesky_hpd, det_correlation, gram, verify_inequality, whitened_pair};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = trial_rng(5, 0, 0);
    let a = ginibre(&mut rng, 5, 2);
    let b = ginibre(&mut rng, 5, 2);
    let m = random_hpd(&mut rng, 5, 1e-3);
    let w = cholesky_hpd(&m)?;

    let weighted = verify_inequality(&a, &b, Some(&w), 1e-9)?;
    let (wa, wb) = whitened_pair(&a, &b, &w)?;
    let plain = verify_inequality(&wa, &wb, None, 1e-9)?;

    println!("weighted:  {} gap {:.6e}", weighted.case_tag, weighted.relative_gap);
    println!("whitened:  {} gap {:.6e}", plain.case_tag, plain.relative_gap);
    println!("unweighted correlation {:.6}", det_correlation(&a, &b, None)?);
    println!("weighted correlation   {:.6}", det_correlation(&a, &b, Some(&w))?);

    // A* M B computed directly agrees with (WA)* (WB).
    let direct = a.adjoint_mul(&m.matmul(&b)?)?;
    assert!(direct.sub(&gram(&a, &b, Some(&w))?)?.frobenius_norm() < 1e-10 * direct.frobenius_norm());
    assert_eq!(weighted.case_tag, plain.case_tag);
    assert!((weighted.relative_gap - plain.relative_gap).abs() < 1e-9);
    Ok(())
}
