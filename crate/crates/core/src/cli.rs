//! The `detcs` command line front end.
//!
//! Commands render into an [`Outcome`] instead of printing, so the binary
//! stays a thin shell and tests can inspect output and exit codes directly.
//!
//! Exit codes: 0 verified, 2 input or validation error, 3 invariant
//! violation (a numerical failure in the kernels, never a property of the
//! input).

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::fuzz::{parse_ensembles, run_fuzz, write_replay, Ensemble, FuzzConfig};
use crate::inequality::{
    column_norm_profile, det_correlation, gram, verify_inequality_with, CaseTag, CsReport,
    SubspaceBasis, Tolerances, DEFAULT_EQUALITY_TOL, DEFAULT_SUBSPACE_TOL,
};
use crate::io::MatrixFile;
use crate::linalg::{cholesky_hpd, log_det, ComplexMatrix, HpdFactor, SignedLogDet};
use crate::oracle::{self, det_cofactor, naive_matmul, MAX_ORACLE_DIM};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Environment variable that overrides `fuzz --seed`.
pub const SEED_ENV: &str = "DETCS_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "detcs",
    version,
    about = "Check |det(A*MB)|^2 <= det(A*MA) det(B*MB) and classify its equality cases"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the inequality for one pair and print a report.
    Verify(VerifyArgs),
    /// Print the determinantal correlation and the projected column norms.
    Correlate(CorrelateArgs),
    /// Print which case of the inequality a pair falls under.
    Classify(ClassifyArgs),
    /// Randomized verification over the built-in ensembles.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// Matrix file for A.
    #[arg(long = "a")]
    pub a: PathBuf,
    /// Matrix file for B.
    #[arg(long = "b")]
    pub b: PathBuf,
    /// Matrix file for the hermitian positive definite weight M.
    #[arg(long = "m")]
    pub m: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = DEFAULT_EQUALITY_TOL)]
    pub tol: f64,
    #[arg(long = "subspace-tol", default_value_t = DEFAULT_SUBSPACE_TOL)]
    pub subspace_tol: f64,
    /// Emit a single-line JSON record.
    #[arg(long)]
    pub json: bool,
    /// Cross-check against the brute-force oracles.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Cross-check against principal-angle cosines.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long = "subspace-tol", default_value_t = DEFAULT_SUBSPACE_TOL)]
    pub subspace_tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FuzzArgs {
    /// Trials per ensemble.
    #[arg(long)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long = "m-max", default_value_t = 8)]
    pub m_max: usize,
    #[arg(long = "n-max", default_value_t = 8)]
    pub n_max: usize,
    /// Comma-separated subset of ginibre, rank_deficient, shared_span, weighted.
    #[arg(long, default_value = "ginibre,rank_deficient,shared_span,weighted")]
    pub ensembles: String,
    #[arg(long, default_value_t = DEFAULT_EQUALITY_TOL)]
    pub tol: f64,
    /// Where replay files for violating instances are written.
    #[arg(long = "replay-dir", default_value = ".")]
    pub replay_dir: PathBuf,
}

/// Rendered result of a command.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn fail(code: i32, message: impl AsRef<str>) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {}\n", message.as_ref()),
            code,
        }
    }
}

/// Exit code for a library error.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InequalityViolation { .. } | Error::BoundViolation { .. } => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

/// Runs a parsed command line. `env_seed` is the value of [`SEED_ENV`], if set.
pub fn run(cli: Cli, env_seed: Option<&str>) -> Outcome {
    match cli.command {
        Command::Verify(args) => cmd_verify(&args),
        Command::Correlate(args) => cmd_correlate(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Fuzz(args) => cmd_fuzz(&args, env_seed),
    }
}

struct Inputs {
    a: ComplexMatrix,
    b: ComplexMatrix,
    weight: Option<HpdFactor>,
}

fn load_inputs(pair: &PairArgs) -> Result<Inputs, Outcome> {
    let load = |p: &PathBuf| {
        MatrixFile::load(p)
            .map(|f| f.matrix)
            .map_err(|e| Outcome::fail(EXIT_INPUT, e.to_string()))
    };
    let a = load(&pair.a)?;
    let b = load(&pair.b)?;
    if a.shape() != b.shape() {
        return Err(Outcome::fail(
            EXIT_INPUT,
            format!(
                "A is {}x{} but B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            ),
        ));
    }
    let weight = match &pair.m {
        Some(p) => {
            let m = load(p)?;
            if m.shape() != (a.rows(), a.rows()) {
                return Err(Outcome::fail(
                    EXIT_INPUT,
                    format!("M must be {0}x{0}, found {1}x{2}", a.rows(), m.rows(), m.cols()),
                ));
            }
            Some(cholesky_hpd(&m).map_err(|e| Outcome::fail(EXIT_INPUT, format!("M: {e}")))?)
        }
        None => None,
    };
    Ok(Inputs { a, b, weight })
}

fn fmt_log(d: &SignedLogDet) -> String {
    if d.zero {
        "0 (zero)".to_string()
    } else {
        format!(
            "exp({}) phase ({} {:+}i)",
            d.log_magnitude, d.phase.re, d.phase.im
        )
    }
}

/// Human-readable report.
pub fn render_report(r: &CsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "case: {}", r.case_tag);
    let _ = writeln!(s, "clause: {}", r.case_tag.clause());
    let _ = writeln!(s, "lhs |det(A*MB)|^2: {}", fmt_log(&r.lhs_log));
    let _ = writeln!(s, "rhs det(A*MA) det(B*MB): {}", fmt_log(&r.rhs_log));
    let _ = writeln!(
        s,
        "correlation: {}",
        r.correlation.map_or("n/a (requires m > n and full rank)".to_string(), |c| c.to_string())
    );
    let _ = writeln!(s, "relative_gap: {}", r.relative_gap);
    let _ = writeln!(s, "equality: {}", r.equality);
    let _ = writeln!(s, "tol: {:e} subspace_tol: {:e}", r.tol_used, r.subspace_tol_used);
    s
}

#[derive(Serialize)]
struct LogDetRecord {
    zero: bool,
    log_magnitude: Option<f64>,
    phase: Option<[f64; 2]>,
}

impl From<&SignedLogDet> for LogDetRecord {
    fn from(d: &SignedLogDet) -> Self {
        if d.zero {
            LogDetRecord {
                zero: true,
                log_magnitude: None,
                phase: None,
            }
        } else {
            LogDetRecord {
                zero: false,
                log_magnitude: Some(d.log_magnitude),
                phase: Some([d.phase.re, d.phase.im]),
            }
        }
    }
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    m: usize,
    n: usize,
    weighted: bool,
    case: &'a str,
    clause: &'a str,
    lhs: LogDetRecord,
    rhs: LogDetRecord,
    correlation: Option<f64>,
    relative_gap: f64,
    equality: bool,
    tol: f64,
    subspace_tol: f64,
}

/// Single-line JSON record of a report; self-contained, tolerances included.
pub fn render_report_json(r: &CsReport, shape: (usize, usize), weighted: bool) -> String {
    let rec = ReportRecord {
        m: shape.0,
        n: shape.1,
        weighted,
        case: r.case_tag.name(),
        clause: r.case_tag.clause(),
        lhs: (&r.lhs_log).into(),
        rhs: (&r.rhs_log).into(),
        correlation: r.correlation,
        relative_gap: r.relative_gap,
        equality: r.equality,
        tol: r.tol_used,
        subspace_tol: r.subspace_tol_used,
    };
    serde_json::to_string(&rec).expect("report serializes")
}

/// One oracle cross-check: a label and whether it passed.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub label: String,
    pub passed: bool,
}

/// Cross-checks the fast kernels on one pair against the oracles.
pub fn oracle_checks(inputs_a: &ComplexMatrix, inputs_b: &ComplexMatrix, weight: Option<&HpdFactor>, report: Option<&CsReport>) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let n = inputs_a.cols();
    let mut push = |label: String, passed: bool| lines.push(CheckLine { label, passed });

    let pairs = [("A*MB", inputs_a, inputs_b), ("A*MA", inputs_a, inputs_a), ("B*MB", inputs_b, inputs_b)];
    for (name, x, y) in pairs {
        let fast = match gram(x, y, weight) {
            Ok(g) => g,
            Err(e) => {
                push(format!("gram {name}: {e}"), false);
                continue;
            }
        };
        let m_matrix = weight.map_or_else(|| ComplexMatrix::identity(x.rows()), |w| w.m_matrix().clone());
        let direct = naive_matmul(&x.conj_transpose(), &m_matrix)
            .and_then(|xm| naive_matmul(&xm, y));
        let scale = x.frobenius_norm() * m_matrix.frobenius_norm() * y.frobenius_norm();
        let diff = direct.and_then(|d| fast.sub(&d)).map(|d| d.frobenius_norm());
        match diff {
            Ok(d) => push(
                format!("gram {name} vs triple loop: difference {d:e}"),
                d <= 1e-12 * scale.max(f64::MIN_POSITIVE),
            ),
            Err(e) => push(format!("gram {name}: {e}"), false),
        }

        if n > MAX_ORACLE_DIM {
            push(format!("det {name}: skipped, n = {n} exceeds oracle limit {MAX_ORACLE_DIM}"), true);
            continue;
        }
        let (lu, cof) = match (log_det(&fast), det_cofactor(&fast)) {
            (Ok(l), Ok(c)) => (l, c),
            (Err(e), _) | (_, Err(e)) => {
                push(format!("det {name}: {e}"), false);
                continue;
            }
        };
        let bound: f64 = (0..n).map(|j| fast.column_norm(j)).product();
        let err = (lu.value() - cof).norm();
        push(
            format!("det {name} LU vs cofactor: difference {err:e}, Hadamard scale {bound:e}"),
            err <= 1e-9 * bound.max(f64::MIN_POSITIVE),
        );
    }

    if let Some(c) = report.and_then(|r| r.correlation) {
        let angles = weight
            .map_or_else(
                || Ok((inputs_a.clone(), inputs_b.clone())),
                |w| crate::inequality::whitened_pair(inputs_a, inputs_b, w),
            )
            .and_then(|(wa, wb)| {
                Ok((SubspaceBasis::from_columns(&wa)?, SubspaceBasis::from_columns(&wb)?))
            })
            .and_then(|(qa, qb)| oracle::principal_angle_cosines(&qa, &qb));
        match angles {
            Ok(pa) => {
                let d = (pa.product() - c).abs();
                push(
                    format!("correlation vs product of principal cosines: difference {d:e}"),
                    d <= 1e-9,
                );
            }
            Err(e) => push(format!("principal angles: {e}"), false),
        }
    }
    lines
}

fn render_checks(lines: &[CheckLine], out: &mut String) -> bool {
    let mut ok = true;
    for l in lines {
        let _ = writeln!(out, "check {}: {}", if l.passed { "ok" } else { "FAILED" }, l.label);
        ok &= l.passed;
    }
    ok
}

pub fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let inputs = match load_inputs(&args.pair) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let tols = Tolerances {
        equality: args.tol,
        subspace: args.subspace_tol,
        ..Tolerances::default()
    };
    let report = match verify_inequality_with(&inputs.a, &inputs.b, inputs.weight.as_ref(), &tols) {
        Ok(r) => r,
        Err(e) => return Outcome::fail(exit_code_for(&e), e.to_string()),
    };

    let mut stdout = if args.json {
        let mut s = render_report_json(&report, inputs.a.shape(), inputs.weight.is_some());
        s.push('\n');
        s
    } else {
        render_report(&report)
    };
    let mut stderr = String::new();
    let mut code = EXIT_OK;

    let breaches = report.invariant_breaches();
    if !breaches.is_empty() {
        for b in breaches {
            let _ = writeln!(stderr, "invariant violated: {b}");
        }
        code = EXIT_VIOLATION;
    }
    if args.check {
        let lines = oracle_checks(&inputs.a, &inputs.b, inputs.weight.as_ref(), Some(&report));
        let target = if args.json { &mut stderr } else { &mut stdout };
        if !render_checks(&lines, target) {
            code = EXIT_VIOLATION;
        }
    }
    Outcome { stdout, stderr, code }
}

pub fn cmd_correlate(args: &CorrelateArgs) -> Outcome {
    let inputs = match load_inputs(&args.pair) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let (m, n) = inputs.a.shape();
    let computed = det_correlation(&inputs.a, &inputs.b, inputs.weight.as_ref()).and_then(|c| {
        let (wa, wb) = match inputs.weight.as_ref() {
            Some(w) => crate::inequality::whitened_pair(&inputs.a, &inputs.b, w)?,
            None => (inputs.a.clone(), inputs.b.clone()),
        };
        let profile = column_norm_profile(&SubspaceBasis::from_columns(&wa)?, &SubspaceBasis::from_columns(&wb)?)?;
        Ok((c, profile))
    });
    let (corr, profile) = match computed {
        Ok(v) => v,
        Err(Error::WrongRegime { .. }) => {
            return Outcome::fail(
                EXIT_INPUT,
                format!("correlation is defined only for m > n (more rows than columns); got m = {m}, n = {n}"),
            )
        }
        Err(e) => return Outcome::fail(exit_code_for(&e), e.to_string()),
    };

    let mut stdout = String::new();
    let _ = writeln!(stdout, "correlation: {corr}");
    let profile_text: Vec<String> = profile.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(stdout, "column norms: {}", profile_text.join(" "));
    let mut code = EXIT_OK;
    if args.check {
        let report = CsReport {
            case_tag: CaseTag::FullRankStrict,
            lhs_log: SignedLogDet::ZERO,
            rhs_log: SignedLogDet::ZERO,
            correlation: Some(corr),
            relative_gap: 0.0,
            equality: false,
            tol_used: DEFAULT_EQUALITY_TOL,
            subspace_tol_used: DEFAULT_SUBSPACE_TOL,
        };
        let lines = oracle_checks(&inputs.a, &inputs.b, inputs.weight.as_ref(), Some(&report));
        if !render_checks(&lines, &mut stdout) {
            code = EXIT_VIOLATION;
        }
    }
    Outcome {
        stdout,
        stderr: String::new(),
        code,
    }
}

pub fn cmd_classify(args: &ClassifyArgs) -> Outcome {
    let inputs = match load_inputs(&args.pair) {
        Ok(i) => i,
        Err(o) => return o,
    };
    match crate::inequality::classify_case(&inputs.a, &inputs.b, inputs.weight.as_ref(), args.subspace_tol) {
        Ok(tag) => Outcome {
            stdout: format!("case: {tag}\nclause: {}\n", tag.clause()),
            stderr: String::new(),
            code: EXIT_OK,
        },
        Err(e) => Outcome::fail(exit_code_for(&e), e.to_string()),
    }
}

pub fn cmd_fuzz(args: &FuzzArgs, env_seed: Option<&str>) -> Outcome {
    let seed = match env_seed {
        Some(s) => match s.trim().parse::<u64>() {
            Ok(v) => v,
            Err(_) => return Outcome::fail(EXIT_INPUT, format!("{SEED_ENV}=`{s}` is not a 64-bit unsigned integer")),
        },
        None => args.seed,
    };
    let ensembles: Vec<Ensemble> = match parse_ensembles(&args.ensembles) {
        Ok(e) => e,
        Err(e) => return Outcome::fail(EXIT_INPUT, e),
    };
    let config = FuzzConfig {
        trials: args.trials,
        seed,
        m_max: args.m_max,
        n_max: args.n_max,
        ensembles,
        tolerances: Tolerances {
            equality: args.tol,
            ..Tolerances::default()
        },
    };
    if let Err(e) = config.validate() {
        return Outcome::fail(EXIT_INPUT, e);
    }

    let summary = run_fuzz(&config);
    let mut stdout = summary.to_string();
    stdout.push('\n');
    let mut stderr = String::new();
    for v in &summary.violations {
        match write_replay(&args.replay_dir, seed, v) {
            Ok((a, b, m)) => {
                let _ = write!(stdout, "replay: detcs verify --a {} --b {}", a.display(), b.display());
                if let Some(m) = m {
                    let _ = write!(stdout, " --m {}", m.display());
                }
                stdout.push('\n');
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: could not write replay files: {e}");
            }
        }
    }
    let code = if summary.is_clean() { EXIT_OK } else { EXIT_VIOLATION };
    Outcome { stdout, stderr, code }
}
