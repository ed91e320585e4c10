// One pair for every case of the inequality, with the reason equality does
// or does not hold.
//
//     cargo run --example case_taxonomy

use detcs::ensembles::{ginibre, low_rank, trial_rng};
use detcs::inequality::DEFAULT_SUBSPACE_TOL;
use detcs::{classify_case, verify_inequality, CaseTag, ComplexMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = trial_rng(3, 0, 0);
    let tall = ginibre(&mut rng, 5, 2);
    let mix = ginibre(&mut rng, 2, 2);

    let pairs: Vec<(CaseTag, ComplexMatrix, ComplexMatrix)> = vec![
        (CaseTag::WideEqualZero, ginibre(&mut rng, 2, 4), ginibre(&mut rng, 2, 4)),
        (CaseTag::SquareEqual, ginibre(&mut rng, 3, 3), ginibre(&mut rng, 3, 3)),
        (CaseTag::RankDeficientZero, low_rank(&mut rng, 5, 2, 1), tall.clone()),
        (CaseTag::FullRankSameSpan, tall.clone(), tall.matmul(&mix)?),
        (CaseTag::FullRankStrict, tall, ginibre(&mut rng, 5, 2)),
    ];

    for (expected, a, b) in &pairs {
        let tag = classify_case(a, b, None, DEFAULT_SUBSPACE_TOL)?;
        let r = verify_inequality(a, b, None, 1e-9)?;
        println!("{:<20} {}x{}  equality={:<5}  gap={:.3e}", tag, a.rows(), a.cols(), r.equality, r.relative_gap);
        println!("    {}", tag.clause());
        assert_eq!(tag, *expected);
        assert_eq!(r.equality, tag.implies_equality());
    }
    Ok(())
}
