#![allow(dead_code)]

use std::collections::BTreeSet;

use bimatrix::enumeration::check_nondegeneracy;
use bimatrix::exact::{int, Rational};
use bimatrix::game::{polytope_form, BimatrixGame, Equilibrium};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn three_by_two() -> BimatrixGame {
    BimatrixGame::from_i64(&[&[3, 3], &[2, 5], &[0, 6]], &[&[3, 2], &[2, 4], &[3, 0]]).unwrap()
}

/// The 3x2 example with the column player's second strategy duplicated.
pub fn duplicate_column() -> BimatrixGame {
    BimatrixGame::from_i64(
        &[&[3, 3, 3], &[2, 5, 5], &[0, 6, 6]],
        &[&[3, 2, 2], &[2, 4, 4], &[3, 0, 0]],
    )
    .unwrap()
}

pub fn random_game(rng: &mut ChaCha8Rng, m: usize, n: usize, lo: i64, hi: i64) -> BimatrixGame {
    let mut draw = |rows: usize, cols: usize| -> Vec<Vec<i64>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(lo..=hi)).collect())
            .collect()
    };
    let a = draw(m, n);
    let b = draw(m, n);
    let a: Vec<&[i64]> = a.iter().map(Vec::as_slice).collect();
    let b: Vec<&[i64]> = b.iter().map(Vec::as_slice).collect();
    BimatrixGame::from_i64(&a, &b).unwrap()
}

/// Random games with entries in `[0, 99]` that `check_nondegeneracy`
/// certifies, together with the number of rejected draws.
pub fn nondegenerate_corpus(seed: u64, m: usize, n: usize, count: usize) -> (Vec<BimatrixGame>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut games = Vec::with_capacity(count);
    let mut rejected = 0;
    while games.len() < count {
        let g = random_game(&mut rng, m, n, 0, 99);
        let report = check_nondegeneracy(&polytope_form(&g).game).unwrap();
        if report.degenerate {
            rejected += 1;
        } else {
            games.push(g);
        }
    }
    (games, rejected)
}

pub fn profile_set(eqs: &[Equilibrium]) -> BTreeSet<(Vec<Rational>, Vec<Rational>)> {
    eqs.iter()
        .map(|e| (e.x.probabilities().to_vec(), e.y.probabilities().to_vec()))
        .collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return int(1);
    }
    let mut total = int(0);
    for j in 0..n {
        if m[0][j] == int(0) {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// All maximal bicliques of `edges` by checking every subset of left
/// vertices; only usable for a handful of vertices.
pub fn brute_force_bicliques(edges: &BTreeSet<(usize, usize)>) -> BTreeSet<(BTreeSet<usize>, BTreeSet<usize>)> {
    let left: Vec<usize> = edges.iter().map(|e| e.0).collect::<BTreeSet<_>>().into_iter().collect();
    let right: BTreeSet<usize> = edges.iter().map(|e| e.1).collect();
    assert!(left.len() <= 16, "too many vertices for brute force");
    let mut all = Vec::new();
    for mask in 1u32..(1 << left.len()) {
        let u: BTreeSet<usize> = (0..left.len()).filter(|b| mask >> b & 1 == 1).map(|b| left[b]).collect();
        let v: BTreeSet<usize> = right
            .iter()
            .copied()
            .filter(|&q| u.iter().all(|&p| edges.contains(&(p, q))))
            .collect();
        if !v.is_empty() {
            all.push((u, v));
        }
    }
    all.iter()
        .filter(|(u, v)| {
            !all.iter()
                .any(|(u2, v2)| (u2, v2) != (u, v) && u.is_subset(u2) && v.is_subset(v2))
        })
        .cloned()
        .collect()
}
