mod common;

use std::collections::{BTreeMap, BTreeSet};

use bimatrix::enumeration::{
    check_nondegeneracy, components, enumerate_equilibria, enumerate_vertices, extreme_equilibria, label_ids,
    maximal_nash_subsets, support_enumeration, NashSubset,
};
use bimatrix::exact::{int, Rational};
use bimatrix::game::{is_equilibrium, polytope_form, rescale_to_strategy, BimatrixGame, MixedStrategy, Player};
use bimatrix::lh::{index, lh_all_labels};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn nondegenerate_oracles_agree() {
    for (m, n, seed) in [(1, 3, 1), (2, 2, 2), (2, 3, 3), (3, 3, 4), (3, 4, 5), (4, 4, 6)] {
        let (games, _) = common::nondegenerate_corpus(100 + seed, m, n, 30);
        for g in games {
            let set = enumerate_equilibria(&g).unwrap();
            let extreme = common::profile_set(&set.equilibria);
            assert_eq!(extreme, common::profile_set(&support_enumeration(&g).unwrap()));
            assert_eq!(extreme.len() % 2, 1);
            let sweep = lh_all_labels(&set.normalized.game).unwrap();
            assert!(common::profile_set(&sweep.equilibria).is_subset(&extreme));
            let sum: i32 = set
                .equilibria
                .iter()
                .map(|e| index(&set.normalized.game, e).unwrap().value())
                .sum();
            assert_eq!(sum, 1);
            assert_eq!(set.subsets.len(), extreme.len());
            assert_eq!(set.components.len(), extreme.len());
        }
    }
}

fn connected_groups(subsets: &[NashSubset]) -> BTreeSet<BTreeSet<usize>> {
    let n = subsets.len();
    let touches = |a: &NashSubset, b: &NashSubset| {
        !a.p_vertices.is_disjoint(&b.p_vertices) || !a.q_vertices.is_disjoint(&b.q_vertices)
    };
    let mut group = vec![usize::MAX; n];
    for start in 0..n {
        if group[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        group[start] = start;
        while let Some(s) = stack.pop() {
            for t in 0..n {
                if group[t] == usize::MAX && touches(&subsets[s], &subsets[t]) {
                    group[t] = start;
                    stack.push(t);
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (i, g) in group.into_iter().enumerate() {
        by_root.entry(g).or_default().insert(i);
    }
    by_root.into_values().collect()
}

fn convex_combination(rng: &mut ChaCha8Rng, owner: Player, points: &[MixedStrategy]) -> MixedStrategy {
    let mut weights: Vec<i64> = points.iter().map(|_| rng.gen_range(0..=5)).collect();
    weights[0] += 1;
    let total = int(weights.iter().sum());
    let probs: Vec<Rational> = (0..points[0].len())
        .map(|k| {
            points
                .iter()
                .zip(&weights)
                .map(|(p, &w)| &p.probabilities()[k] * int(w))
                .sum::<Rational>()
                / &total
        })
        .collect();
    MixedStrategy::new(owner, probs).unwrap()
}

fn check_subsets(g: &BimatrixGame, rng: &mut ChaCha8Rng) -> usize {
    let g = polytope_form(g).game;
    let table = enumerate_vertices(&g).unwrap();
    let pairs = extreme_equilibria(&table);
    let edges: BTreeSet<(usize, usize)> = pairs.iter().map(|p| (p.p, p.q)).collect();
    let full: BTreeSet<usize> = (1..=g.label_count()).collect();

    // Every completely labeled pair is an edge, and nothing else is.
    for (i, p) in table.p_vertices.iter().enumerate() {
        for (j, q) in table.q_vertices.iter().enumerate() {
            let union: BTreeSet<usize> = label_ids(&p.labels).into_iter().chain(label_ids(&q.labels)).collect();
            assert_eq!(union == full, edges.contains(&(i, j)));
        }
    }

    let subsets = maximal_nash_subsets(&pairs);
    let got: BTreeSet<(BTreeSet<usize>, BTreeSet<usize>)> =
        subsets.iter().map(|s| (s.p_vertices.clone(), s.q_vertices.clone())).collect();
    assert_eq!(got.len(), subsets.len());
    assert_eq!(got, common::brute_force_bicliques(&edges));

    for s in &subsets {
        assert!(s.maximal);
        let xs: Vec<MixedStrategy> = s.p_vertices.iter().map(|&i| rescale_to_strategy(&table.p_vertices[i]).unwrap().0).collect();
        let ys: Vec<MixedStrategy> = s.q_vertices.iter().map(|&j| rescale_to_strategy(&table.q_vertices[j]).unwrap().0).collect();
        for _ in 0..5 {
            let x = convex_combination(rng, Player::One, &xs);
            let y = convex_combination(rng, Player::Two, &ys);
            assert!(is_equilibrium(&g, &x, &y));
        }
    }

    let comps = components(&subsets);
    let got: BTreeSet<BTreeSet<usize>> = comps
        .iter()
        .map(|c| c.iter().map(|s| subsets.iter().position(|t| t == s).unwrap()).collect())
        .collect();
    assert_eq!(got, connected_groups(&subsets));
    comps.iter().map(Vec::len).max().unwrap_or(0)
}

#[test]
fn bicliques_components_and_union_on_degenerate_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut merged = 0;
    let mut degenerate = 0;
    for _ in 0..300 {
        let (m, n) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let g = common::random_game(&mut rng, m, n, 0, 2);
        if check_nondegeneracy(&polytope_form(&g).game).unwrap().degenerate {
            degenerate += 1;
        }
        if check_subsets(&g, &mut rng) > 1 {
            merged += 1;
        }
    }
    assert!(degenerate > 100, "{degenerate}");
    assert!(merged > 10, "{merged}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn bicliques_match_brute_force(m in 1usize..=3, n in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_game(&mut rng, m, n, 0, 3);
        check_subsets(&g, &mut rng);
    }
}

// Counts and vertices come from an exhaustive check of all binding sets and
// all vertex subsets, run outside this crate.
#[test]
fn duplicate_column_game_is_frozen() {
    let g = common::duplicate_column();
    let set = enumerate_equilibria(&g).unwrap();
    let profiles: Vec<(Vec<String>, Vec<String>)> = set
        .equilibria
        .iter()
        .map(|e| {
            (
                e.x.probabilities().iter().map(ToString::to_string).collect(),
                e.y.probabilities().iter().map(ToString::to_string).collect(),
            )
        })
        .collect();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    assert_eq!(
        profiles,
        vec![
            (s(&["0", "3/5", "2/5"]), s(&["1/3", "0", "2/3"])),
            (s(&["0", "3/5", "2/5"]), s(&["1/3", "2/3", "0"])),
            (s(&["2/3", "1/3", "0"]), s(&["2/3", "0", "1/3"])),
            (s(&["2/3", "1/3", "0"]), s(&["2/3", "1/3", "0"])),
            (s(&["1", "0", "0"]), s(&["1", "0", "0"])),
        ]
    );
    assert_eq!((set.table.p_vertices.len(), set.table.q_vertices.len()), (5, 7));
    assert_eq!(set.subsets.len(), 3);
    let shapes: BTreeSet<(usize, usize)> = set.subsets.iter().map(|s| (s.p_vertices.len(), s.q_vertices.len())).collect();
    assert_eq!(shapes, BTreeSet::from([(1, 1), (1, 2)]));
    assert_eq!(set.components.len(), 3);

    let report = &set.degeneracy;
    assert!(report.degenerate);
    let witnesses: Vec<(char, Vec<String>, Vec<usize>)> = report
        .witnesses
        .iter()
        .map(|w| (w.polytope.symbol(), w.coordinates.iter().map(ToString::to_string).collect(), label_ids(&w.labels)))
        .collect();
    assert_eq!(
        witnesses,
        vec![
            ('P', s(&["0", "1/4", "0"]), vec![1, 3, 5, 6]),
            ('P', s(&["0", "1/4", "1/6"]), vec![1, 4, 5, 6]),
            ('P', s(&["1/4", "1/8", "0"]), vec![3, 4, 5, 6]),
        ]
    );
    assert!(support_enumeration(&g).unwrap_err().is_degeneracy());
}

#[test]
fn two_pure_best_responses_make_a_game_degenerate() {
    // Against the first row the column player is indifferent.
    let g = BimatrixGame::from_i64(&[&[2, 1], &[1, 2]], &[&[1, 1], &[2, 1]]).unwrap();
    let report = check_nondegeneracy(&g).unwrap();
    assert!(report.degenerate);
    let witness = report.witnesses.iter().find(|w| w.polytope.symbol() == 'P').unwrap();
    assert_eq!(label_ids(&witness.labels).len(), 3);
    assert!(!check_nondegeneracy(&common::three_by_two()).unwrap().degenerate);
}
