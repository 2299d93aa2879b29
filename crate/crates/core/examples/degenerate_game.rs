//! A degenerate game: the column player's second strategy is duplicated.
//! Equilibria come in segments, support enumeration refuses the game, and
//! Lemke-Howson still terminates thanks to the lexicographic ratio test.
//!
//! ```bash
//! cargo run --example degenerate_game
//! ```

use bimatrix::enumeration::{enumerate_equilibria, label_ids, support_enumeration};
use bimatrix::exact::format_rational;
use bimatrix::game::{is_equilibrium, rescale_to_strategy, BimatrixGame, Label};
use bimatrix::lh::lh_solve;

fn main() -> bimatrix::Result<()> {
    let game = BimatrixGame::from_i64(
        &[&[3, 3, 3], &[2, 5, 5], &[0, 6, 6]],
        &[&[3, 2, 2], &[2, 4, 4], &[3, 0, 0]],
    )?;
    let v = |p: &[bimatrix::Rational]| p.iter().map(format_rational).collect::<Vec<_>>().join(", ");

    let set = enumerate_equilibria(&game)?;
    for w in &set.degeneracy.witnesses {
        println!("{} vertex ({}) has labels {:?}", w.polytope.symbol(), v(&w.coordinates), label_ids(&w.labels));
    }

    for (i, s) in set.subsets.iter().enumerate() {
        let xs: Vec<String> = s
            .p_vertices
            .iter()
            .map(|&p| format!("({})", v(rescale_to_strategy(&set.table.p_vertices[p]).unwrap().0.probabilities())))
            .collect();
        let ys: Vec<String> = s
            .q_vertices
            .iter()
            .map(|&q| format!("({})", v(rescale_to_strategy(&set.table.q_vertices[q]).unwrap().0.probabilities())))
            .collect();
        println!("subset {i}: conv{{{}}} x conv{{{}}}", xs.join(" "), ys.join(" "));
    }
    println!("{} components", set.components.len());

    match support_enumeration(&game) {
        Err(e) if e.is_degeneracy() => println!("support enumeration: {e}"),
        other => println!("support enumeration: unexpected {other:?}"),
    }

    for k in 1..=game.label_count() {
        let (e, path) = lh_solve(&game, Label(k))?;
        assert!(is_equilibrium(&game, &e.x, &e.y));
        println!("label {k}: {} pivots to x = ({}), y = ({})", path.steps.len(), v(e.x.probabilities()), v(e.y.probabilities()));
    }
    Ok(())
}
