//! Lemke's method on a small linear complementarity problem
//! `w = q - Cz, w >= 0, z >= 0, z'w = 0`, and the labeled polytope
//! `{z >= 0, Cz <= 1}` solved by complementary pivoting from the origin.
//!
//! ```bash
//! cargo run --example lemke_lcp
//! ```

use bimatrix::exact::{format_rational, int, RationalMatrix};
use bimatrix::lh::{index_of_point, lemke_lcp_observed, lh_symmetric, LcpProblem, LemkeOutcome};

fn main() -> bimatrix::Result<()> {
    let show = |v: &[bimatrix::Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");

    let c = RationalMatrix::from_i64(&[&[-2, -1, 0], &[-1, -3, -1], &[0, -1, -2]])?;
    let problem = LcpProblem::new(c, vec![int(-1), int(2), int(-3)])?;
    let covering = vec![int(1); 3];
    match lemke_lcp_observed(&problem, &covering, &mut |_, record| println!("{record}"))? {
        LemkeOutcome::Solution { z, w, .. } => println!("z = ({})  w = ({})", show(&z), show(&w)),
        LemkeOutcome::RayTermination { steps } => println!("ray termination after {} pivots", steps.len()),
    }

    println!();
    let c = RationalMatrix::from_i64(&[&[0, 3, 0], &[2, 2, 2], &[4, 0, 0]])?;
    for k in 1..=3 {
        let run = lh_symmetric(&c, k)?;
        println!(
            "missing label {k}: z = ({}) with index {} after {} pivots",
            show(&run.z),
            index_of_point(&c, &run.z)?,
            run.steps.len()
        );
    }
    Ok(())
}
