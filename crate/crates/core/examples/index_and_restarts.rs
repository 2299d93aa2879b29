//! Run Lemke-Howson for every missing label, compute equilibrium indices and
//! restart from each equilibrium to see which ones are linked.
//!
//! ```bash
//! cargo run --example index_and_restarts
//! ```

use bimatrix::exact::format_rational;
use bimatrix::game::{BimatrixGame, Equilibrium, Label};
use bimatrix::lh::{index, lh_all_labels, lh_from, Endpoint};

fn name(e: &Equilibrium) -> String {
    let v = |p: &[bimatrix::Rational]| p.iter().map(format_rational).collect::<Vec<_>>().join(",");
    format!("(({}), ({}))", v(e.x.probabilities()), v(e.y.probabilities()))
}

fn main() -> bimatrix::Result<()> {
    let game = BimatrixGame::from_i64(&[&[3, 3], &[2, 5], &[0, 6]], &[&[3, 2], &[2, 4], &[3, 0]])?;
    let sweep = lh_all_labels(&game)?;

    for path in &sweep.paths {
        let end = path.end.equilibrium().map_or("artificial".into(), name);
        println!("label {}: {} pivots to {end}", path.missing_label.0, path.steps.len());
    }

    println!();
    for e in &sweep.equilibria {
        println!("{} has index {}", name(e), index(&game, e)?);
    }

    println!();
    for e in &sweep.equilibria {
        for k in 1..=game.label_count() {
            let (end, path) = lh_from(&game, e, Label(k))?;
            let target = match &end {
                Endpoint::Artificial => "artificial".to_string(),
                Endpoint::Equilibrium(f) => name(f),
            };
            println!("from {} drop label {k}: {} pivots to {target}", name(e), path.steps.len());
        }
    }
    Ok(())
}
