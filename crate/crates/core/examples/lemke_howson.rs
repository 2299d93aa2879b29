//! Follow one Lemke-Howson path and print every pivot.
//!
//! ```bash
//! cargo run --example lemke_howson -- 2
//! ```
//!
//! The optional argument is the missing label (default 1).

use bimatrix::exact::format_rational;
use bimatrix::game::{BimatrixGame, Label};
use bimatrix::lh::lh_solve_observed;

fn main() -> bimatrix::Result<()> {
    let label: usize = std::env::args().nth(1).map_or(1, |s| s.parse().expect("label must be a number"));
    let game = BimatrixGame::from_i64(&[&[3, 3], &[2, 5], &[0, 6]], &[&[3, 2], &[2, 4], &[3, 0]])?;

    let (eq, path) = lh_solve_observed(&game, Label(label), &mut |tableau, record| {
        let basis: Vec<String> = tableau.basis().iter().map(ToString::to_string).collect();
        println!("{record}   basis {{{}}}", basis.join(", "));
    })?;

    let show = |v: &[bimatrix::Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
    println!("missing label {label}: {} pivots", path.steps.len());
    println!("x = ({})", show(eq.x.probabilities()));
    println!("y = ({})", show(eq.y.probabilities()));
    println!("payoffs = ({}, {})", format_rational(&eq.u), format_rational(&eq.v));
    Ok(())
}
