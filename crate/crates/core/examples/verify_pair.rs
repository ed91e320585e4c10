// Verify the inequality for one random tall pair and print the report.
//
//     cargo run --example verify_pair

use detcs::cli::render_report;
use detcs::ensembles::{ginibre, trial_rng};
use detcs::inequality::DEFAULT_EQUALITY_TOL;
use detcs::{verify_inequality, CaseTag};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = trial_rng(11, 0, 0);
    let a = ginibre(&mut rng, 6, 3);
    let b = ginibre(&mut rng, 6, 3);

    let report = verify_inequality(&a, &b, None, DEFAULT_EQUALITY_TOL)?;
    print!("{}", render_report(&report));

    assert_eq!(report.case_tag, CaseTag::FullRankStrict);
    assert!(report.lhs_log.log_magnitude < report.rhs_log.log_magnitude);
    // The gap is exactly 1 - correlation^2.
    let c = report.correlation.expect("tall full-rank pair");
    assert!((report.relative_gap - (1.0 - c * c)).abs() < 1e-10);
    Ok(())
}
