mod common;

use std::collections::{BTreeSet, HashSet};

use bimatrix::enumeration::enumerate_equilibria;
use bimatrix::exact::{det_sign, int, Rational, RationalMatrix, Sign};
use bimatrix::game::{polytope_form, symmetrize, BimatrixGame, Label};
use bimatrix::lh::{lemke_forced_start, lemke_lcp, lh_from, lh_solve_observed, verify_opposite_index, LcpProblem, LemkeOutcome};
use bimatrix::tableau::{PivotRecord, Tableau, VarId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn normal(c: &RationalMatrix, v: VarId) -> Vec<Rational> {
    match v {
        VarId::W(i) => c.row(i - 1).to_vec(),
        VarId::Z(i) => (1..=c.rows()).map(|j| if j == i { int(-1) } else { int(0) }).collect(),
        VarId::Z0 => unreachable!("no z0 in Lemke-Howson"),
    }
}

fn det_of(c: &RationalMatrix, vars: &[VarId]) -> Sign {
    let cols: Vec<Vec<Rational>> = vars.iter().map(|&v| normal(c, v)).collect();
    det_sign(&RationalMatrix::from_columns(&cols).unwrap()).unwrap()
}

/// Checks every invariant after one pivot of a missing-`k` path on
/// `S = {z >= 0, Cz <= 1}`.
struct PathChecker<'a> {
    c: &'a RationalMatrix,
    k: usize,
    seen: HashSet<BTreeSet<VarId>>,
    pivots: usize,
}

impl<'a> PathChecker<'a> {
    fn observe(&mut self, t: &Tableau, rec: &PivotRecord) {
        let d = self.c.rows();
        self.pivots += 1;
        let w: Vec<Rational> = (1..=d).map(|i| t.value(VarId::W(i)).unwrap()).collect();
        let z: Vec<Rational> = (1..=d).map(|i| t.value(VarId::Z(i)).unwrap()).collect();
        let cz = self.c.mul_vec(&z).unwrap();
        for i in 0..d {
            assert_eq!(&w[i] + &cz[i], int(1), "w + Cz = 1 fails in row {i}");
            assert!(w[i] >= int(0) && z[i] >= int(0));
        }
        assert!(t.is_lexico_positive());
        assert!(t.verify_basic_solution());
        for i in (1..=d).filter(|&i| i != self.k) {
            assert!(!(t.is_basic(VarId::W(i)) && t.is_basic(VarId::Z(i))), "pair {i} both basic");
        }
        assert!(self.seen.insert(t.basis().iter().copied().collect()), "basis repeated");

        // Normals of the common edge, then the one dropped by the entering
        // variable and the one picked up by the leaving variable.
        let edge: Vec<VarId> = t.nonbasic().into_iter().filter(|&v| v != rec.leaving).collect();
        assert_eq!(edge.len(), d - 1);
        let mut before = vec![rec.entering];
        before.extend(&edge);
        let mut after = vec![rec.leaving];
        after.extend(&edge);
        let s_before = det_of(self.c, &before);
        assert_ne!(s_before, Sign::Zero);
        assert_eq!(det_of(self.c, &after), -s_before, "pivot {} did not change sign", rec.step);
    }
}

#[test]
fn pivot_invariants_on_random_nondegenerate_games() {
    let mut total = 0;
    for (size, seed) in [((2, 2), 1), ((2, 4), 2), ((3, 3), 3), ((4, 3), 4), ((4, 4), 5)] {
        let (games, _) = common::nondegenerate_corpus(seed, size.0, size.1, 25);
        for g in games {
            let g = polytope_form(&g).game;
            let c = symmetrize(&g);
            for k in 1..=g.label_count() {
                let mut checker = PathChecker { c: &c, k, seen: HashSet::new(), pivots: 0 };
                let (_, path) = lh_solve_observed(&g, Label(k), &mut |t, r| checker.observe(t, r)).unwrap();
                assert_eq!(checker.pivots, path.steps.len());
                assert!(verify_opposite_index(&g, &path).unwrap());
                total += checker.pivots;
            }
        }
    }
    assert!(total > 1000);
}

#[test]
fn every_restart_path_joins_opposite_indices() {
    let (games, _) = common::nondegenerate_corpus(21, 3, 3, 40);
    for g in games {
        let g = polytope_form(&g).game;
        let set = enumerate_equilibria(&g).unwrap();
        for e in &set.equilibria {
            for k in 1..=g.label_count() {
                let (end, path) = lh_from(&g, e, Label(k)).unwrap();
                assert!(verify_opposite_index(&g, &path).unwrap());
                if let Some(f) = end.equilibrium() {
                    assert!(set.equilibria.iter().any(|x| x.same_profile(f)));
                    assert!(!f.same_profile(e));
                }
            }
        }
    }
}

fn lcp_holds(c: &RationalMatrix, q: &[Rational], z: &[Rational]) -> bool {
    let cz = c.mul_vec(z).unwrap();
    let w: Vec<Rational> = q.iter().zip(&cz).map(|(a, b)| a - b).collect();
    let dot: Rational = z.iter().zip(&w).map(|(a, b)| a * b).sum();
    z.iter().all(|v| v >= &int(0)) && w.iter().all(|v| v >= &int(0)) && dot == int(0)
}

#[test]
fn lemke_solutions_satisfy_the_lcp() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut solved = 0;
    for _ in 0..300 {
        let d = rng.gen_range(1..=5);
        // With `w = q - Cz`, an entrywise negative `C` is strictly copositive
        // in the usual `w = q + Mz` sense, so Lemke's method always solves it.
        let positive = rng.gen_bool(0.5);
        let rows: Vec<Vec<Rational>> = (0..d)
            .map(|_| (0..d).map(|_| int(if positive { rng.gen_range(-9..=-1) } else { rng.gen_range(-9..=9) })).collect())
            .collect();
        let c = RationalMatrix::from_rows(rows).unwrap();
        let q: Vec<Rational> = (0..d).map(|_| int(rng.gen_range(-9..=9))).collect();
        let covering: Vec<Rational> = (0..d).map(|i| int(1 + i as i64)).collect();
        let problem = LcpProblem::new(c.clone(), q.clone()).unwrap();
        match lemke_lcp(&problem, &covering) {
            Ok(LemkeOutcome::Solution { z, w, .. }) => {
                assert!(lcp_holds(&c, &q, &z));
                assert!(problem.is_solution(&z));
                let cz = c.mul_vec(&z).unwrap();
                assert!(w.iter().zip(q.iter().zip(&cz)).all(|(w, (q, cz))| w == &(q - cz)));
                solved += 1;
            }
            Ok(LemkeOutcome::RayTermination { .. }) => assert!(!positive, "positive matrix ray-terminated"),
            Err(e) => assert!(e.is_degeneracy() || !positive, "{e}"),
        }
    }
    assert!(solved > 150);
}

/// The cost-form bimatrix LCP `q = -1`, `C = -[[0, K - A], [(K - B)^T, 0]]`.
fn cost_form(g: &BimatrixGame) -> LcpProblem {
    let (m, n) = (g.m(), g.n());
    let top = g.a().entries().iter().chain(g.b().entries()).max().unwrap() + int(1);
    let mut c = RationalMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            c.set(i, m + j, g.a().get(i, j) - &top);
            c.set(m + j, i, g.b().get(i, j) - &top);
        }
    }
    LcpProblem::new(c, vec![int(-1); m + n]).unwrap()
}

// With covering vector 1 every slack hits zero together when z0 enters, and
// the complement of the leaving slack is unblocked: a secondary ray after
// one pivot. Bimatrix LCPs therefore go through the forced start instead.
#[test]
fn plain_lemke_ray_terminates_on_the_cost_form() {
    let g = common::three_by_two();
    let problem = cost_form(&g);
    match lemke_lcp(&problem, &vec![int(1); 5]).unwrap() {
        LemkeOutcome::RayTermination { steps } => assert_eq!(steps.len(), 1),
        LemkeOutcome::Solution { .. } => panic!("expected a secondary ray"),
    }
}

#[test]
fn forced_start_reproduces_lemke_howson_on_random_games() {
    let (games, _) = common::nondegenerate_corpus(51, 3, 4, 30);
    for g in games {
        let g = polytope_form(&g).game;
        let c = symmetrize(&g);
        let d = g.label_count();
        let problem = LcpProblem::new(c.clone(), vec![int(1); d]).unwrap();
        for k in 1..=d {
            let mut steps = 0;
            let (e, _) = lh_solve_observed(&g, Label(k), &mut |_, _| steps += 1).unwrap();
            let LemkeOutcome::Solution { z, steps: lemke_steps, .. } = lemke_forced_start(&problem, k).unwrap() else {
                panic!("ray termination");
            };
            assert!(lcp_holds(&c, &vec![int(1); d], &z));
            assert_eq!(lemke_steps.len(), steps);
            let sx: Rational = z[..g.m()].iter().sum();
            let x: Vec<Rational> = z[..g.m()].iter().map(|v| v / &sx).collect();
            assert_eq!(x, e.x.probabilities());
        }
    }
}
