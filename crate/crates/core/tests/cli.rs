use std::path::Path;
use std::process::{Command, Output};

use detcs::cli::{EXIT_INPUT, EXIT_OK, EXIT_VIOLATION};
use detcs::ComplexMatrix;

fn detcs(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detcs"))
        .args(args)
        .env_remove("DETCS_SEED")
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, m: &ComplexMatrix) -> String {
    let p = dir.join(name);
    detcs::io::MatrixFile::save(&p, m).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", &ComplexMatrix::identity(2));
    let out = detcs(dir.path(), &["verify", "--a", &a, "--b", &a]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(stdout(&out).contains("case: SquareEqual"));

    std::fs::write(dir.path().join("bad.txt"), "2 2\n1 0 0\n").unwrap();
    let out = detcs(dir.path(), &["verify", "--a", "bad.txt", "--b", &a]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let c = write(dir.path(), "c.txt", &ComplexMatrix::identity(3));
    let out = detcs(dir.path(), &["verify", "--a", &a, "--b", &c]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));

    let out = detcs(dir.path(), &["verify", "--a", &a, "--b", &a, "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn json_is_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", &ComplexMatrix::from_real(3, 1, &[1.0, 0.0, 0.0]).unwrap());
    let b = write(dir.path(), "b.txt", &ComplexMatrix::from_real(3, 1, &[1.0, 1.0, 0.0]).unwrap());
    let out = detcs(dir.path(), &["verify", "--a", &a, "--b", &b, "--json"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["case"], "FullRankStrict");
    assert!((v["relative_gap"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn seed_from_environment_wins() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_detcs"));
        cmd.args(["fuzz", "--trials", "5", "--seed", "1"]).current_dir(dir.path());
        match env {
            Some(v) => cmd.env("DETCS_SEED", v),
            None => cmd.env_remove("DETCS_SEED"),
        };
        cmd.output().unwrap()
    };
    let plain = run(None);
    let overridden = run(Some("99"));
    assert!(stdout(&plain).starts_with("fuzz: seed 1 "));
    assert!(stdout(&overridden).starts_with("fuzz: seed 99 "));
    assert_eq!(run(Some("nope")).status.code(), Some(EXIT_INPUT));
}

#[test]
fn replay_files_reproduce_violations() {
    // An absurdly tight equality tolerance turns rounding in the equality
    // cases into reported violations.
    let dir = tempfile::tempdir().unwrap();
    let out = detcs(
        dir.path(),
        &["fuzz", "--trials", "20", "--seed", "3", "--ensembles", "shared_span", "--tol", "1e-300"],
    );
    assert_eq!(out.status.code(), Some(EXIT_VIOLATION));
    let text = stdout(&out);
    let replays: Vec<&str> = text.lines().filter_map(|l| l.strip_prefix("replay: detcs ")).collect();
    assert!(!replays.is_empty());
    for r in replays {
        let mut args: Vec<&str> = r.split_whitespace().collect();
        args.extend(["--tol", "1e-300"]);
        let again = detcs(dir.path(), &args);
        assert_eq!(again.status.code(), Some(EXIT_VIOLATION), "{r}");
    }
}

#[test]
fn correlate_and_classify() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.txt", &ComplexMatrix::identity(2));
    let out = detcs(dir.path(), &["correlate", "--a", &sq, "--b", &sq]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m > n"));

    let wide = write(dir.path(), "w.txt", &ComplexMatrix::from_real(1, 2, &[1.0, 2.0]).unwrap());
    let out = detcs(dir.path(), &["classify", "--a", &wide, "--b", &wide]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(stdout(&out).contains("WideEqualZero"));
}
