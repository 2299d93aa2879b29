//! Parse a game file and produce the same report the `bimatrix` binary
//! prints, without going through the command line.
//!
//! ```bash
//! cargo run --example json_report -- crates/core/data/shifted.txt
//! ```

use bimatrix::cli::{parse_game, run, Command};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/three_by_two.txt").into());
    let game = parse_game(&std::fs::read_to_string(&path)?)?.into_game()?;

    let outcome = run(&game, &Command::Index);
    println!("{}", outcome.report.to_json());
    std::process::exit(outcome.exit_code);
}
