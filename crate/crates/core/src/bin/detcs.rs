use std::io::Write;

use clap::Parser;
use detcs::cli::{run, Cli, SEED_ENV};

fn main() {
    let cli = Cli::parse();
    let env_seed = std::env::var(SEED_ENV).ok();
    let outcome = run(cli, env_seed.as_deref());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
