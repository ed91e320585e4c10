// Seeded randomized verification over the four built-in ensembles.
//
//     cargo run --release --example fuzz_campaign

use detcs::fuzz::{run_fuzz, Ensemble, FuzzConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = FuzzConfig {
        trials: 200,
        seed: 1,
        m_max: 6,
        n_max: 6,
        ensembles: Ensemble::ALL.to_vec(),
        ..FuzzConfig::default()
    };
    let summary = run_fuzz(&config);
    print!("{summary}");

    assert!(summary.is_clean(), "{} violations", summary.violations.len());
    assert_eq!(summary.total_trials(), 800);
    // Same seed, same result.
    assert_eq!(run_fuzz(&config).to_string(), summary.to_string());
    Ok(())
}
