//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, ExitCode};

use detcs::ensembles::{ginibre, low_rank, random_hpd, trial_rng, HPD_EPSILON};
use detcs::fuzz::{compare_reports, run_trials, Ensemble, FuzzConfig};
use detcs::inequality::{det_correlation_raw, DEFAULT_EQUALITY_TOL};
use detcs::oracle::{
    condition_number, det_cofactor, find_bilinearity_counterexample, principal_angle_cosines,
    BILINEARITY_THRESHOLD,
};
use detcs::{
    cholesky_hpd, det_correlation, gram, log_det, verify_inequality, whitened_pair, CaseTag,
    SubspaceBasis,
};
use rand::Rng;

const TARGETED: usize = 1000;

struct Line {
    id: u32,
    pass: bool,
    detail: String,
}

fn line(id: u32, pass: bool, detail: impl Into<String>) -> Line {
    Line {
        id,
        pass,
        detail: detail.into(),
    }
}

fn tall_shape<R: Rng>(rng: &mut R) -> (usize, usize) {
    let n = rng.random_range(1..=7);
    (rng.random_range(n + 1..=8), n)
}

fn criteria_1_and_4() -> (Line, Line) {
    let config = FuzzConfig {
        trials: 2500,
        seed: 2024,
        ..FuzzConfig::default()
    };
    let outcomes = run_trials(&config);
    let failed: Vec<_> = outcomes.iter().filter(|(_, o)| !o.passed()).collect();
    let violations = outcomes
        .iter()
        .filter(|(_, o)| o.failures.iter().any(|f| f.contains("inequality violated")))
        .count();
    let first = failed
        .first()
        .map(|(_, o)| format!("; first: {} #{} {:?}", o.ensemble, o.trial, o.failures))
        .unwrap_or_default();
    let c1 = line(
        1,
        failed.is_empty() && violations == 0,
        format!(
            "{} trials, {} inequality violations, {} failed checks{first}",
            outcomes.len(),
            violations,
            failed.len()
        ),
    );

    let mut max_raw = 0.0f64;
    let mut max_prof = 0.0f64;
    let mut measured = 0;
    for (_, o) in &outcomes {
        if let (Some(r), Some(p)) = (o.raw_correlation, o.max_profile) {
            max_raw = max_raw.max(r);
            max_prof = max_prof.max(p);
            measured += 1;
        }
    }
    let c4 = line(
        4,
        measured > 0 && max_raw <= 1.0 + 1e-10 && max_prof <= 1.0 + 1e-10,
        format!(
            "{measured} pairs, max raw correlation - 1 = {:+.2e}, max profile - 1 = {:+.2e}",
            max_raw - 1.0,
            max_prof - 1.0
        ),
    );
    (c1, c4)
}

fn criterion_2() -> Line {
    let mut problems = Vec::new();
    let mut strict = 0;
    let mut worst_square_gap = 0.0f64;
    let mut worst_shared = 0.0f64;
    for i in 0..TARGETED as u64 {
        // Wide.
        let mut rng = trial_rng(1, 101, i);
        let m = rng.random_range(1..=7);
        let n = rng.random_range(m + 1..=8);
        let (a, b) = (ginibre(&mut rng, m, n), ginibre(&mut rng, m, n));
        match verify_inequality(&a, &b, None, DEFAULT_EQUALITY_TOL) {
            Ok(r) if r.case_tag == CaseTag::WideEqualZero
                && r.equality
                && r.lhs_log.zero
                && r.rhs_log.zero => {}
            other => problems.push(format!("wide #{i}: {other:?}")),
        }

        // Rank deficient, tall.
        let mut rng = trial_rng(1, 102, i);
        let (m, n) = tall_shape(&mut rng);
        let rank = rng.random_range(0..n);
        let deficient = low_rank(&mut rng, m, n, rank);
        let generic = ginibre(&mut rng, m, n);
        let (a, b) = if i % 2 == 0 {
            (deficient, generic)
        } else {
            (generic, deficient)
        };
        match verify_inequality(&a, &b, None, DEFAULT_EQUALITY_TOL) {
            Ok(r) if r.case_tag == CaseTag::RankDeficientZero
                && r.equality
                && r.lhs_log.zero
                && r.rhs_log.zero => {}
            other => problems.push(format!("rank-deficient #{i}: {other:?}")),
        }

        // Square.
        let mut rng = trial_rng(1, 103, i);
        let n = rng.random_range(1..=8);
        let (a, b) = (ginibre(&mut rng, n, n), ginibre(&mut rng, n, n));
        match verify_inequality(&a, &b, None, DEFAULT_EQUALITY_TOL) {
            Ok(r) if r.case_tag == CaseTag::SquareEqual && r.equality => {
                worst_square_gap = worst_square_gap.max(r.relative_gap);
                if r.relative_gap > 1e-10 {
                    problems.push(format!("square #{i}: gap {}", r.relative_gap));
                }
            }
            other => problems.push(format!("square #{i}: {other:?}")),
        }

        // Shared span.
        let mut rng = trial_rng(1, 104, i);
        let (m, n) = tall_shape(&mut rng);
        let a = ginibre(&mut rng, m, n);
        let b = a.matmul(&ginibre(&mut rng, n, n)).unwrap();
        match verify_inequality(&a, &b, None, DEFAULT_EQUALITY_TOL) {
            Ok(r) if r.case_tag == CaseTag::FullRankSameSpan && r.equality => {
                let dev = (1.0 - r.correlation.unwrap_or(0.0)).abs();
                worst_shared = worst_shared.max(dev);
                if dev > 1e-10 {
                    problems.push(format!("shared #{i}: correlation off by {dev}"));
                }
            }
            other => problems.push(format!("shared #{i}: {other:?}")),
        }

        // Generic tall.
        let mut rng = trial_rng(1, 105, i);
        let (m, n) = tall_shape(&mut rng);
        let (a, b) = (ginibre(&mut rng, m, n), ginibre(&mut rng, m, n));
        if let Ok(r) = verify_inequality(&a, &b, None, DEFAULT_EQUALITY_TOL) {
            if r.case_tag == CaseTag::FullRankStrict && !r.equality {
                strict += 1;
            }
        }
    }
    let strict_frac = strict as f64 / TARGETED as f64;
    let pass = problems.is_empty() && strict_frac >= 0.999;
    let mut detail = format!(
        "{TARGETED} per clause; strict {strict_frac:.4}, worst square gap {worst_square_gap:.2e}, \
         worst shared-span |1-c| {worst_shared:.2e}"
    );
    if let Some(p) = problems.first() {
        detail.push_str(&format!("; {} problems, first: {p}", problems.len()));
    }
    line(2, pass, detail)
}

fn criterion_3() -> Line {
    let mut worst = 0.0f64;
    let mut used = 0;
    let mut i = 0u64;
    let mut errors = Vec::new();
    while used < TARGETED {
        let mut rng = trial_rng(3, 301, i);
        i += 1;
        let (m, n) = tall_shape(&mut rng);
        let (a, b) = (ginibre(&mut rng, m, n), ginibre(&mut rng, m, n));
        if condition_number(&a).unwrap() >= 1e6 || condition_number(&b).unwrap() >= 1e6 {
            continue;
        }
        used += 1;
        let step = || -> detcs::Result<f64> {
            let cross = log_det(&gram(&a, &b, None)?)?;
            let aa = log_det(&gram(&a, &a, None)?)?;
            let bb = log_det(&gram(&b, &b, None)?)?;
            let c = det_correlation(&a, &b, None)?;
            let lhs = 2.0 * cross.log_magnitude;
            let rhs = 2.0 * c.ln() + aa.log_magnitude + bb.log_magnitude;
            Ok((lhs - rhs).abs())
        };
        match step() {
            Ok(d) => worst = worst.max(d),
            Err(e) => errors.push(e.to_string()),
        }
    }
    line(
        3,
        errors.is_empty() && worst <= 1e-9,
        format!("{used} instances, max |log difference| {worst:.2e}, {} errors", errors.len()),
    )
}

fn criterion_5() -> Line {
    let mut worst_lu = 0.0f64;
    for i in 0..TARGETED as u64 {
        let mut rng = trial_rng(5, 501, i);
        let n = rng.random_range(1..=5);
        let a = ginibre(&mut rng, n, n);
        let exact = det_cofactor(&a).unwrap();
        let lu = log_det(&a).unwrap().value();
        worst_lu = worst_lu.max((lu - exact).norm() / exact.norm());
    }
    let mut worst_angle = 0.0f64;
    for i in 0..TARGETED as u64 {
        let mut rng = trial_rng(5, 502, i);
        let (m, n) = tall_shape(&mut rng);
        let (a, b) = (ginibre(&mut rng, m, n), ginibre(&mut rng, m, n));
        let qa = SubspaceBasis::from_columns(&a).unwrap();
        let qb = SubspaceBasis::from_columns(&b).unwrap();
        let product = principal_angle_cosines(&qa, &qb).unwrap().product();
        let c = det_correlation(&a, &b, None).unwrap();
        worst_angle = worst_angle.max((product - c).abs());
    }
    line(
        5,
        worst_lu <= 1e-9 && worst_angle <= 1e-9,
        format!("LU vs cofactor max rel {worst_lu:.2e}; cosine product vs correlation max {worst_angle:.2e}"),
    )
}

fn criterion_6() -> Line {
    let mut problems = Vec::new();
    for i in 0..TARGETED as u64 {
        let mut rng = trial_rng(6, 601, i);
        let m = rng.random_range(1..=8);
        let n = rng.random_range(1..=8);
        let (a, b) = (ginibre(&mut rng, m, n), ginibre(&mut rng, m, n));
        let w = cholesky_hpd(&random_hpd(&mut rng, m, HPD_EPSILON)).unwrap();
        let weighted = verify_inequality(&a, &b, Some(&w), DEFAULT_EQUALITY_TOL).unwrap();
        let (wa, wb) = whitened_pair(&a, &b, &w).unwrap();
        let plain = verify_inequality(&wa, &wb, None, DEFAULT_EQUALITY_TOL).unwrap();
        let diffs = compare_reports(&weighted, &plain);
        if !diffs.is_empty() {
            problems.push(format!("#{i}: {diffs:?}"));
        }
        if m > n {
            let raw_w = det_correlation_raw(&a, &b, Some(&w)).unwrap();
            let raw_p = det_correlation_raw(&wa, &wb, None).unwrap();
            if (raw_w - raw_p).abs() > 1e-9 {
                problems.push(format!("#{i}: correlation {raw_w} vs {raw_p}"));
            }
        }
    }
    let detail = match problems.first() {
        None => format!("{TARGETED} weighted instances agree"),
        Some(p) => format!("{} disagreements, first {p}", problems.len()),
    };
    line(6, problems.is_empty(), detail)
}

fn criterion_7() -> Line {
    match find_bilinearity_counterexample(42) {
        Ok(w) => line(
            7,
            w.discrepancy > BILINEARITY_THRESHOLD,
            format!(
                "seed 42: discrepancy {:.4} at trial {} ({}x{})",
                w.discrepancy,
                w.trial,
                w.a1.rows(),
                w.a1.cols()
            ),
        ),
        Err(e) => line(7, false, e.to_string()),
    }
}

fn criterion_8() -> Line {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_detcs"))
            .args(["fuzz", "--trials", "1000", "--seed", "7"])
            .env_remove("DETCS_SEED")
            .current_dir(std::env::temp_dir())
            .output()
            .expect("spawn detcs")
    };
    let (first, second) = (run(), run());
    let same = first.stdout == second.stdout && first.stderr == second.stderr;
    line(
        8,
        same && first.status.success() && !first.stdout.is_empty(),
        format!(
            "exit {:?}, {} stdout bytes, identical: {same}",
            first.status.code(),
            first.stdout.len()
        ),
    )
}

fn main() -> ExitCode {
    // Keep the ensemble list in sync with the fuzz harness.
    assert_eq!(Ensemble::ALL.len(), 4);
    let (c1, c4) = criteria_1_and_4();
    let mut lines = vec![
        c1,
        criterion_2(),
        criterion_3(),
        c4,
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    lines.sort_by_key(|l| l.id);
    let mut failed = 0;
    for l in &lines {
        let verdict = if l.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict}  {}", l.id, l.detail);
        if !l.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
