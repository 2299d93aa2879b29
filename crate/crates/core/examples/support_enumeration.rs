//! Enumerate equilibria by solving the indifference equations for every pair
//! of equal-size supports.
//!
//! ```bash
//! cargo run --example support_enumeration
//! ```

use bimatrix::enumeration::{support_enumeration, test_support_pair, SupportOutcome, SupportPair};
use bimatrix::exact::format_rational;
use bimatrix::game::BimatrixGame;

fn main() -> bimatrix::Result<()> {
    let game = BimatrixGame::from_i64(&[&[3, 3], &[2, 5], &[0, 6]], &[&[3, 2], &[2, 4], &[3, 0]])?;
    let v = |p: &[bimatrix::Rational]| p.iter().map(format_rational).collect::<Vec<_>>().join(", ");

    for rows in [vec![0, 1], vec![0, 2], vec![1, 2]] {
        let pair = SupportPair { rows: rows.clone(), cols: vec![0, 1] };
        let verdict = match test_support_pair(&game, &pair)? {
            SupportOutcome::Equilibrium(e) => format!("equilibrium x = ({})", v(e.x.probabilities())),
            SupportOutcome::Infeasible { x, .. } => format!("infeasible, x = ({})", v(&x)),
            SupportOutcome::NotBestResponse { .. } => "not a best response".into(),
            SupportOutcome::NoSolution => "no solution".into(),
            SupportOutcome::Underdetermined { rank, .. } => format!("underdetermined, rank {rank}"),
        };
        println!("rows {rows:?} x cols [0, 1]: {verdict}");
    }

    println!();
    for e in support_enumeration(&game)? {
        println!(
            "x = ({})  y = ({})  payoffs ({}, {})",
            v(e.x.probabilities()),
            v(e.y.probabilities()),
            format_rational(&e.u),
            format_rational(&e.v)
        );
    }
    Ok(())
}
