// Matrix files and the command front end: write a pair to disk, then run
// `detcs verify` and `detcs classify` on it in-process.
//
//     cargo run --example matrix_files

use clap::Parser;
use detcs::cli::{run, Cli, EXIT_OK};
use detcs::io::{parse_matrix, serialize_matrix, MatrixFile};
use detcs::ComplexMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("detcs-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let a = parse_matrix("# columns e1, e2\n3 2\n1 0 0 0\n0 0 1 0\n0 0 0 0\n")?;
    let b = ComplexMatrix::from_real(3, 2, &[1.0, 0.0, 0.0, 0.5, 0.0, 0.5])?;
    print!("{}", serialize_matrix(&b));

    let (pa, pb) = (dir.join("a.txt"), dir.join("b.txt"));
    MatrixFile::save(&pa, &a)?;
    MatrixFile::save(&pb, &b)?;
    assert_eq!(MatrixFile::load(&pb)?.matrix, b);

    let (pa, pb) = (pa.to_string_lossy().into_owned(), pb.to_string_lossy().into_owned());
    for args in [
        vec!["detcs", "verify", "--a", &pa, "--b", &pb, "--check"],
        vec!["detcs", "verify", "--a", &pa, "--b", &pb, "--json"],
        vec!["detcs", "classify", "--a", &pa, "--b", &pb],
        vec!["detcs", "correlate", "--a", &pa, "--b", &pb],
    ] {
        println!("$ {}", args.join(" "));
        let out = run(Cli::try_parse_from(&args)?, None);
        print!("{}", out.stdout);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    }

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
