use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bimatrix::cli::{parse_game, parse_strategy_pair, run, Command, EXIT_USAGE};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bimatrix", version, about = "Exact Nash equilibria of bimatrix games")]
struct Args {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Sub {
    /// Follow a Lemke-Howson path.
    Solve {
        game: PathBuf,
        /// Missing label, 1..=m+n.
        #[arg(long, conflicts_with = "all_labels")]
        label: Option<usize>,
        /// Start at this equilibrium (two lines: x, then y).
        #[arg(long, value_name = "FILE", conflicts_with = "all_labels")]
        from_equilibrium: Option<PathBuf>,
        /// Print every pivot.
        #[arg(long)]
        trace: bool,
        /// Run once per label and collect the distinct endpoints.
        #[arg(long)]
        all_labels: bool,
    },
    /// All extreme equilibria, maximal Nash subsets and components.
    Enumerate { game: PathBuf },
    /// Support enumeration (nondegenerate games only).
    SupportEnum { game: PathBuf },
    /// Equilibria with their indices (nondegenerate games only).
    Index { game: PathBuf },
    /// Report whether the game is nondegenerate.
    Check { game: PathBuf },
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match execute(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

fn execute(args: Args) -> Result<i32, String> {
    let (path, from) = match &args.command {
        Sub::Solve { game, from_equilibrium, .. } => (game, from_equilibrium.as_ref()),
        Sub::Enumerate { game } | Sub::SupportEnum { game } | Sub::Index { game } | Sub::Check { game } => (game, None),
    };
    let file = parse_game(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let (m, n) = (file.m, file.n);
    let game = file.into_game().map_err(|e| e.to_string())?;
    let from = match from {
        Some(p) => Some(parse_strategy_pair(&read(p)?, m, n).map_err(|e| format!("{}: {e}", p.display()))?),
        None => None,
    };
    let command = match args.command {
        Sub::Solve { label, trace, all_labels, .. } => Command::Solve { label, from, trace, all_labels },
        Sub::Enumerate { .. } => Command::Enumerate,
        Sub::SupportEnum { .. } => Command::SupportEnum,
        Sub::Index { .. } => Command::Index,
        Sub::Check { .. } => Command::Check,
    };
    let outcome = run(&game, &command);
    match args.format {
        Format::Json => println!("{}", outcome.report.to_json()),
        Format::Text => print!("{}", outcome.report.to_text()),
    }
    Ok(outcome.exit_code)
}
