//! Seeded randomized verification over four matrix ensembles.
//!
//! Each ensemble targets one group of clauses:
//!
//! * `ginibre`: independent Ginibre `A`, `B` (generic strict case for `m > n`);
//! * `rank_deficient`: one of `A`, `B` is a product of thin factors;
//! * `shared_span`: `B = A C` for a Ginibre `C`, so the spans coincide;
//! * `weighted`: Ginibre `A`, `B` with a random HPD weight `M = G^* G + eps I`.
//!
//! Trial `t` of ensemble `e` draws from its own RNG stream derived from
//! `(seed, e, t)`, so results do not depend on evaluation order and the
//! trials run in parallel.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::ensembles::{ginibre, low_rank, random_hpd, trial_rng, HPD_EPSILON};
use crate::error::Error;
use crate::inequality::{
    column_norm_profile, det_correlation_raw, verify_inequality_with, whitened_pair, CaseTag,
    CsReport, SubspaceBasis, Tolerances, UNIT_BOUND_SLACK,
};
use crate::io::{MatrixFile, MatrixFileError};
use crate::linalg::{cholesky_hpd, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ensemble {
    Ginibre,
    RankDeficient,
    SharedSpan,
    Weighted,
}

impl Ensemble {
    pub const ALL: [Ensemble; 4] = [
        Ensemble::Ginibre,
        Ensemble::RankDeficient,
        Ensemble::SharedSpan,
        Ensemble::Weighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Ginibre => "ginibre",
            Ensemble::RankDeficient => "rank_deficient",
            Ensemble::SharedSpan => "shared_span",
            Ensemble::Weighted => "weighted",
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ensemble::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                format!("unknown ensemble `{s}` (expected ginibre, rank_deficient, shared_span or weighted)")
            })
    }
}

/// Parses a comma-separated ensemble list, keeping the first occurrence of each.
pub fn parse_ensembles(list: &str) -> Result<Vec<Ensemble>, String> {
    let mut out: Vec<Ensemble> = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let e: Ensemble = item.parse()?;
        if !out.contains(&e) {
            out.push(e);
        }
    }
    if out.is_empty() {
        return Err("ensemble list is empty".to_string());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig {
    /// Trials per ensemble.
    pub trials: usize,
    pub seed: u64,
    pub m_max: usize,
    pub n_max: usize,
    pub ensembles: Vec<Ensemble>,
    pub tolerances: Tolerances,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0,
            m_max: 8,
            n_max: 8,
            ensembles: Ensemble::ALL.to_vec(),
            tolerances: Tolerances::default(),
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.trials == 0 {
            return Err("trials must be at least 1".into());
        }
        if self.m_max == 0 || self.n_max == 0 {
            return Err("m_max and n_max must be at least 1".into());
        }
        if self.ensembles.is_empty() {
            return Err("no ensembles selected".into());
        }
        self.tolerances.validate().map_err(|e| e.to_string())
    }
}

/// One random instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub ensemble: Ensemble,
    pub trial: usize,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub weight: Option<ComplexMatrix>,
}

/// Draws trial `trial` of `ensemble`.
pub fn generate_instance(config: &FuzzConfig, ensemble: Ensemble, trial: usize) -> Instance {
    let mut rng = trial_rng(config.seed, ensemble.stream(), trial as u64);
    let m = rng.random_range(1..=config.m_max);
    let n = rng.random_range(1..=config.n_max);
    let (a, b, weight) = match ensemble {
        Ensemble::Ginibre => (ginibre(&mut rng, m, n), ginibre(&mut rng, m, n), None),
        Ensemble::RankDeficient => {
            let rank = rng.random_range(0..=m.min(n - 1));
            let deficient = low_rank(&mut rng, m, n, rank);
            let generic = ginibre(&mut rng, m, n);
            if rng.random_bool(0.5) {
                (deficient, generic, None)
            } else {
                (generic, deficient, None)
            }
        }
        Ensemble::SharedSpan => {
            let a = ginibre(&mut rng, m, n);
            let mix = ginibre(&mut rng, n, n);
            let b = a.matmul(&mix).expect("conformable");
            (a, b, None)
        }
        Ensemble::Weighted => {
            let a = ginibre(&mut rng, m, n);
            let b = ginibre(&mut rng, m, n);
            (a, b, Some(random_hpd(&mut rng, m, HPD_EPSILON)))
        }
    };
    Instance {
        ensemble,
        trial,
        a,
        b,
        weight,
    }
}

/// Everything measured on one instance.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub ensemble: Ensemble,
    pub trial: usize,
    pub shape: (usize, usize),
    pub report: Option<CsReport>,
    /// Unclamped correlation, when defined.
    pub raw_correlation: Option<f64>,
    /// Largest projected column norm, when defined.
    pub max_profile: Option<f64>,
    pub failures: Vec<String>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every check on one instance.
pub fn check_instance(inst: &Instance, tols: &Tolerances) -> TrialOutcome {
    let (m, n) = inst.a.shape();
    let mut out = TrialOutcome {
        ensemble: inst.ensemble,
        trial: inst.trial,
        shape: (m, n),
        report: None,
        raw_correlation: None,
        max_profile: None,
        failures: Vec::new(),
    };

    let weight = match inst.weight.as_ref().map(cholesky_hpd).transpose() {
        Ok(w) => w,
        Err(e) => {
            out.failures.push(format!("weight rejected: {e}"));
            return out;
        }
    };

    let report = match verify_inequality_with(&inst.a, &inst.b, weight.as_ref(), tols) {
        Ok(r) => r,
        Err(e) => {
            out.failures.push(e.to_string());
            return out;
        }
    };
    out.failures.extend(report.invariant_breaches());

    let tag = report.case_tag;
    let shape_ok = match m.cmp(&n) {
        std::cmp::Ordering::Less => tag == CaseTag::WideEqualZero,
        std::cmp::Ordering::Equal => tag == CaseTag::SquareEqual,
        std::cmp::Ordering::Greater => !matches!(tag, CaseTag::WideEqualZero | CaseTag::SquareEqual),
    };
    if !shape_ok {
        out.failures.push(format!("case {tag} inconsistent with shape {m}x{n}"));
    }

    match inst.ensemble {
        Ensemble::RankDeficient => {
            if m > n && tag != CaseTag::RankDeficientZero {
                out.failures.push(format!("rank-deficient input classified as {tag}"));
            }
            if !(report.lhs_log.zero && report.rhs_log.zero) {
                out.failures.push("rank-deficient input with a nonzero side".into());
            }
        }
        Ensemble::SharedSpan => {
            if !report.equality {
                out.failures.push(format!("shared span reported strict ({tag})"));
            }
            if let Some(c) = report.correlation {
                if c < 1.0 - 1e-10 {
                    out.failures.push(format!("shared span correlation {c} below 1"));
                }
            }
        }
        Ensemble::Weighted => {
            if let Some(w) = weight.as_ref() {
                match whitened_pair(&inst.a, &inst.b, w)
                    .and_then(|(wa, wb)| verify_inequality_with(&wa, &wb, None, tols))
                {
                    Ok(plain) => out.failures.extend(compare_reports(&report, &plain)),
                    Err(e) => out.failures.push(format!("whitened pair: {e}")),
                }
            }
        }
        Ensemble::Ginibre => {}
    }

    if tag.has_correlation() {
        let unit_bounds = || -> Result<(f64, f64), Error> {
            let raw = det_correlation_raw(&inst.a, &inst.b, weight.as_ref())?;
            let (wa, wb) = match weight.as_ref() {
                Some(w) => whitened_pair(&inst.a, &inst.b, w)?,
                None => (inst.a.clone(), inst.b.clone()),
            };
            let profile = column_norm_profile(
                &SubspaceBasis::from_columns(&wa)?,
                &SubspaceBasis::from_columns(&wb)?,
            )?;
            Ok((raw, profile.into_iter().fold(0.0, f64::max)))
        };
        match unit_bounds() {
            Ok((raw, prof)) => {
                if raw > 1.0 + UNIT_BOUND_SLACK {
                    out.failures.push(format!("raw correlation {raw} above 1"));
                }
                out.raw_correlation = Some(raw);
                out.max_profile = Some(prof);
            }
            Err(e) => out.failures.push(e.to_string()),
        }
    }

    out.report = Some(report);
    out
}

/// Differences between a weighted report and the report of its whitened pair.
pub fn compare_reports(weighted: &CsReport, plain: &CsReport) -> Vec<String> {
    const FIELD_TOL: f64 = 1e-9;
    let mut out = Vec::new();
    if weighted.case_tag != plain.case_tag {
        out.push(format!(
            "whitening changed case {} -> {}",
            weighted.case_tag, plain.case_tag
        ));
    }
    if weighted.equality != plain.equality {
        out.push("whitening changed equality verdict".into());
    }
    let close = |x: f64, y: f64| (x == y) || (x - y).abs() <= FIELD_TOL;
    for (name, x, y) in [
        ("lhs", &weighted.lhs_log, &plain.lhs_log),
        ("rhs", &weighted.rhs_log, &plain.rhs_log),
    ] {
        if x.zero != y.zero || (!x.zero && !close(x.log_magnitude, y.log_magnitude)) {
            out.push(format!("whitening changed {name}"));
        }
    }
    if !close(weighted.relative_gap, plain.relative_gap) {
        out.push("whitening changed relative gap".into());
    }
    match (weighted.correlation, plain.correlation) {
        (None, None) => {}
        (Some(x), Some(y)) if close(x, y) => {}
        _ => out.push("whitening changed correlation".into()),
    }
    out
}

/// Aggregates for one ensemble; only max and count reductions.
#[derive(Debug, Clone, Default)]
pub struct EnsembleStats {
    pub trials: usize,
    pub passed: usize,
    pub tags: BTreeMap<CaseTag, usize>,
    /// Largest `log lhs - log rhs` over instances with both sides nonzero.
    pub worst_log_slack: Option<f64>,
    /// Largest relative gap among equality verdicts.
    pub worst_equality_gap: Option<f64>,
    pub max_raw_correlation: Option<f64>,
    pub max_profile: Option<f64>,
}

fn fold_max(acc: &mut Option<f64>, v: Option<f64>) {
    if let Some(v) = v {
        *acc = Some(acc.map_or(v, |a: f64| a.max(v)));
    }
}

impl EnsembleStats {
    fn absorb(&mut self, o: &TrialOutcome) {
        self.trials += 1;
        if o.passed() {
            self.passed += 1;
        }
        if let Some(r) = &o.report {
            *self.tags.entry(r.case_tag).or_default() += 1;
            fold_max(&mut self.worst_log_slack, r.log_slack());
            if r.equality {
                fold_max(&mut self.worst_equality_gap, Some(r.relative_gap));
            }
        }
        fold_max(&mut self.max_raw_correlation, o.raw_correlation);
        fold_max(&mut self.max_profile, o.max_profile);
    }
}

/// A failed trial, with the inputs needed to replay it.
#[derive(Debug, Clone)]
pub struct Violation {
    pub instance: Instance,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub per_ensemble: Vec<(Ensemble, EnsembleStats)>,
    pub violations: Vec<Violation>,
}

impl FuzzSummary {
    pub fn total_trials(&self) -> usize {
        self.per_ensemble.iter().map(|(_, s)| s.trials).sum()
    }

    pub fn total_passed(&self) -> usize {
        self.per_ensemble.iter().map(|(_, s)| s.passed).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the configured trials, keeping every outcome.
pub fn run_trials(config: &FuzzConfig) -> Vec<(Instance, TrialOutcome)> {
    let jobs: Vec<(Ensemble, usize)> = config
        .ensembles
        .iter()
        .flat_map(|&e| (0..config.trials).map(move |t| (e, t)))
        .collect();
    jobs.into_par_iter()
        .map(|(e, t)| {
            let inst = generate_instance(config, e, t);
            let outcome = check_instance(&inst, &config.tolerances);
            (inst, outcome)
        })
        .collect()
}

/// Runs the harness and aggregates per-ensemble statistics.
pub fn run_fuzz(config: &FuzzConfig) -> FuzzSummary {
    let mut per_ensemble: Vec<(Ensemble, EnsembleStats)> = config
        .ensembles
        .iter()
        .map(|&e| (e, EnsembleStats::default()))
        .collect();
    let mut violations = Vec::new();
    for (inst, outcome) in run_trials(config) {
        let slot = per_ensemble
            .iter_mut()
            .find(|(e, _)| *e == outcome.ensemble)
            .expect("configured ensemble");
        slot.1.absorb(&outcome);
        if !outcome.passed() {
            violations.push(Violation {
                instance: inst,
                failures: outcome.failures,
            });
        }
    }
    FuzzSummary {
        config: config.clone(),
        per_ensemble,
        violations,
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:e}"))
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "fuzz: seed {} trials {} per ensemble, m_max {}, n_max {}, tol {:e}, subspace_tol {:e}",
            c.seed, c.trials, c.m_max, c.n_max, c.tolerances.equality, c.tolerances.subspace
        )?;
        for (e, s) in &self.per_ensemble {
            let tags: Vec<String> = s.tags.iter().map(|(t, k)| format!("{t}={k}")).collect();
            writeln!(f, "ensemble {e}: {}/{} passed", s.passed, s.trials)?;
            writeln!(f, "  cases: {}", tags.join(" "))?;
            writeln!(
                f,
                "  worst log slack {}, worst equality gap {}, max raw correlation {}, max column norm {}",
                fmt_opt(s.worst_log_slack),
                fmt_opt(s.worst_equality_gap),
                fmt_opt(s.max_raw_correlation),
                fmt_opt(s.max_profile)
            )?;
        }
        for v in &self.violations {
            let (m, n) = v.instance.a.shape();
            writeln!(
                f,
                "violation: ensemble {} trial {} ({m}x{n}): {}",
                v.instance.ensemble,
                v.instance.trial,
                v.failures.join("; ")
            )?;
        }
        write!(
            f,
            "total: {}/{} passed, {} violations",
            self.total_passed(),
            self.total_trials(),
            self.violations.len()
        )
    }
}

/// Writes the matrices of a violation into `dir` and returns the paths
/// `(a, b, m)`. The files feed straight back into `detcs verify`.
pub fn write_replay(
    dir: &Path,
    seed: u64,
    violation: &Violation,
) -> Result<(PathBuf, PathBuf, Option<PathBuf>), MatrixFileError> {
    let inst = &violation.instance;
    let stem = format!("detcs-replay-s{seed}-{}-t{}", inst.ensemble, inst.trial);
    let a_path = dir.join(format!("{stem}-a.txt"));
    let b_path = dir.join(format!("{stem}-b.txt"));
    MatrixFile::save(&a_path, &inst.a)?;
    MatrixFile::save(&b_path, &inst.b)?;
    let m_path = match &inst.weight {
        Some(w) => {
            let p = dir.join(format!("{stem}-m.txt"));
            MatrixFile::save(&p, w)?;
            Some(p)
        }
        None => None,
    };
    Ok((a_path, b_path, m_path))
}
