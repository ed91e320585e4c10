// Determinantal correlation, principal angles and projected column norms
// for two planes in C^3 meeting at 45 degrees.
//
//     cargo run --example subspace_correlation

use std::f64::consts::FRAC_1_SQRT_2;

use detcs::oracle::principal_angle_cosines;
use detcs::{column_norm_profile, det_correlation, subspace_equal, ComplexMatrix, SubspaceBasis};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = ComplexMatrix::from_real(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0])?;
    let b = ComplexMatrix::from_real(3, 2, &[1.0, 0.0, 0.0, FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2])?;

    let c = det_correlation(&a, &b, None)?;
    let qa = SubspaceBasis::from_columns(&a)?;
    let qb = SubspaceBasis::from_columns(&b)?;
    let angles = principal_angle_cosines(&qa, &qb)?;
    let profile = column_norm_profile(&qa, &qb)?;

    println!("correlation        {c:.16}");
    println!("principal cosines  {:?}", angles.cosines);
    println!("angles (degrees)   {:?}", angles.cosines.iter().map(|x| x.acos().to_degrees()).collect::<Vec<_>>());
    println!("column profile     {profile:?}");
    println!("same span          {}", subspace_equal(&a, &b, 1e-8)?);

    assert!((c - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((angles.product() - c).abs() < 1e-12);
    // Mixing the columns does not move the span.
    let mixed = b.matmul(&ComplexMatrix::from_real(2, 2, &[1.0, 2.0, -1.0, 1.0])?)?;
    assert!((det_correlation(&a, &mixed, None)? - c).abs() < 1e-14);
    Ok(())
}
