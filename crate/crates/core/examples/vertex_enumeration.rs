//! List the labeled vertices of both best-response polytopes and match the
//! completely labeled pairs.
//!
//! ```bash
//! cargo run --example vertex_enumeration
//! ```

use bimatrix::enumeration::{enumerate_equilibria, label_ids};
use bimatrix::exact::format_rational;
use bimatrix::game::{BimatrixGame, LabeledPoint};

fn show(p: &LabeledPoint) -> String {
    let c: Vec<String> = p.coordinates.iter().map(format_rational).collect();
    format!("({})  labels {:?}", c.join(", "), label_ids(&p.labels))
}

fn main() -> bimatrix::Result<()> {
    let game = BimatrixGame::from_i64(&[&[3, 3], &[2, 5], &[0, 6]], &[&[3, 2], &[2, 4], &[3, 0]])?;
    let set = enumerate_equilibria(&game)?;

    println!("P:");
    for (i, p) in set.table.p_vertices.iter().enumerate() {
        println!("  p{i} {}", show(p));
    }
    println!("Q:");
    for (j, q) in set.table.q_vertices.iter().enumerate() {
        println!("  q{j} {}", show(q));
    }
    println!("completely labeled pairs:");
    for pair in &set.pairs {
        println!("  (p{}, q{})", pair.p, pair.q);
    }
    println!("{} maximal Nash subsets in {} components", set.subsets.len(), set.components.len());
    Ok(())
}
