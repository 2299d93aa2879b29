//! All equilibria of a bimatrix game: support enumeration for nondegenerate
//! games, and vertex enumeration of the best-response polytopes with the
//! maximal Nash subsets and components for any game.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use num_bigint::BigInt;

use crate::exact::{integer_determinant, integer_lift, solve_linear, LinearSolution, Rational, RationalMatrix};
use crate::game::{
    is_equilibrium, labels_of, polytope_form, rescale_to_strategy, BimatrixGame, Equilibrium,
    Label, LabeledPoint, MixedStrategy, Player, Polytope,
};

/// Binding-set candidates above which [`VertexTable::oversized`] is set.
pub const DEFAULT_CANDIDATE_LIMIT: usize = 1_000_000;

/// Supports `rows` (player 1) and `cols` (player 2), 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPair {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportOutcome {
    Equilibrium(Box<Equilibrium>),
    /// One of the indifference systems has no solution.
    NoSolution,
    /// One of the systems has infinitely many solutions (degenerate game).
    Underdetermined { player: Player, rank: usize },
    /// A probability came out negative.
    Infeasible { x: Vec<Rational>, y: Vec<Rational> },
    /// Indifferent on the supports, but some outside strategy pays more.
    NotBestResponse { x: Vec<Rational>, y: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexTable {
    pub m: usize,
    pub n: usize,
    pub p_vertices: Vec<LabeledPoint>,
    pub q_vertices: Vec<LabeledPoint>,
    pub candidates_examined: usize,
    pub oversized: bool,
}

/// A P-vertex and a Q-vertex (indices into a [`VertexTable`]) that together
/// carry every label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPair {
    pub p: usize,
    pub q: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NashSubset {
    pub p_vertices: BTreeSet<usize>,
    pub q_vertices: BTreeSet<usize>,
    pub maximal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub degenerate: bool,
    pub witnesses: Vec<LabeledPoint>,
}

impl DegeneracyReport {
    pub fn from_table(table: &VertexTable) -> Self {
        let witnesses: Vec<LabeledPoint> = table
            .p_vertices
            .iter()
            .filter(|v| v.labels.len() > table.m)
            .chain(table.q_vertices.iter().filter(|v| v.labels.len() > table.n))
            .cloned()
            .collect();
        DegeneracyReport {
            degenerate: !witnesses.is_empty(),
            witnesses,
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn solve_indifference(
    payoff: impl Fn(usize, usize) -> Rational,
    own: &[usize],
    other: &[usize],
) -> Result<LinearSolution> {
    // Unknowns: probabilities on `own`, then the common payoff.
    let k = own.len();
    let mut rows = Vec::with_capacity(other.len() + 1);
    for &o in other {
        let mut row: Vec<Rational> = own.iter().map(|&s| payoff(s, o)).collect();
        row.push(-Rational::one());
        rows.push(row);
    }
    let mut total = vec![Rational::one(); k];
    total.push(Rational::zero());
    rows.push(total);
    let mut rhs = vec![Rational::zero(); other.len()];
    rhs.push(Rational::one());
    solve_linear(&RationalMatrix::from_rows(rows)?, &rhs)
}

/// Solves the indifference equations for one support pair and checks the
/// result for feasibility and best responses.
pub fn test_support_pair(game: &BimatrixGame, pair: &SupportPair) -> Result<SupportOutcome> {
    let (m, n) = (game.m(), game.n());
    if pair.rows.is_empty()
        || pair.cols.is_empty()
        || pair.rows.iter().any(|&i| i >= m)
        || pair.cols.iter().any(|&j| j >= n)
    {
        return Err(Error::InvalidStrategy(format!("support pair {pair:?} out of range")));
    }
    let xs = solve_indifference(|i, j| game.b().get(i, j).clone(), &pair.rows, &pair.cols)?;
    let ys = solve_indifference(|j, i| game.a().get(i, j).clone(), &pair.cols, &pair.rows)?;
    let expand = |sol: &[Rational], support: &[usize], len: usize| {
        let mut full = vec![Rational::zero(); len];
        for (s, &i) in support.iter().enumerate() {
            full[i] = sol[s].clone();
        }
        full
    };
    let (x, y) = match (xs, ys) {
        (LinearSolution::NoSolution, _) | (_, LinearSolution::NoSolution) => {
            return Ok(SupportOutcome::NoSolution)
        }
        (LinearSolution::Infinite { rank }, _) => {
            return Ok(SupportOutcome::Underdetermined { player: Player::One, rank })
        }
        (_, LinearSolution::Infinite { rank }) => {
            return Ok(SupportOutcome::Underdetermined { player: Player::Two, rank })
        }
        (LinearSolution::Unique(xs), LinearSolution::Unique(ys)) => (
            expand(&xs, &pair.rows, m),
            expand(&ys, &pair.cols, n),
        ),
    };
    if x.iter().chain(&y).any(Signed::is_negative) {
        return Ok(SupportOutcome::Infeasible { x, y });
    }
    let xs = MixedStrategy::new(Player::One, x.clone())?;
    let ys = MixedStrategy::new(Player::Two, y.clone())?;
    if !is_equilibrium(game, &xs, &ys) {
        return Ok(SupportOutcome::NotBestResponse { x, y });
    }
    Ok(SupportOutcome::Equilibrium(Box::new(Equilibrium::new(game, xs, ys))))
}

fn sort_dedup(mut eqs: Vec<Equilibrium>) -> Vec<Equilibrium> {
    eqs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    eqs.dedup_by(|a, b| a.same_profile(b));
    eqs
}

/// All equilibria of a nondegenerate game from equal-size support pairs.
///
/// A singular indifference system can still occur in a nondegenerate game,
/// for example when two rows give the column player the same payoff
/// difference between two columns that are never best responses. Such a
/// pair holds no equilibrium: moving along the solution line to the
/// boundary of the support would give a point with too many labels.
pub fn support_enumeration(game: &BimatrixGame) -> Result<Vec<Equilibrium>> {
    let report = check_nondegeneracy(&polytope_form(game).game)?;
    if report.degenerate {
        return Err(Error::Degenerate(Box::new(report)));
    }
    let (m, n) = (game.m(), game.n());
    let mut found = Vec::new();
    for k in 1..=m.min(n) {
        for rows in combinations(m, k) {
            for cols in combinations(n, k) {
                let pair = SupportPair { rows: rows.clone(), cols };
                if let SupportOutcome::Equilibrium(e) = test_support_pair(game, &pair)? {
                    found.push(*e);
                }
            }
        }
    }
    Ok(sort_dedup(found))
}

pub fn enumerate_vertices(game: &BimatrixGame) -> Result<VertexTable> {
    enumerate_vertices_with_limit(game, DEFAULT_CANDIDATE_LIMIT)
}

/// Every vertex of `P` and `Q` other than the origin, found by solving each
/// square subsystem of binding inequalities.
pub fn enumerate_vertices_with_limit(game: &BimatrixGame, limit: usize) -> Result<VertexTable> {
    if !game.is_polytope_form() {
        return Err(Error::NotPolytopeForm);
    }
    let (m, n) = (game.m(), game.n());
    let candidates = binomial(m + n, m).saturating_add(binomial(m + n, n));

    // Constraint for each label, in label order.
    let p_constraints: Vec<Constraint> = (0..m)
        .map(Constraint::Zero)
        .chain((0..n).map(Constraint::Row))
        .collect();
    let q_constraints: Vec<Constraint> = (0..m)
        .map(Constraint::Row)
        .chain((0..n).map(Constraint::Zero))
        .collect();
    let b_rows: Vec<Vec<Rational>> = (0..n).map(|j| game.b().column(j)).collect();
    let a_rows: Vec<Vec<Rational>> = (0..m).map(|i| game.a().row(i).to_vec()).collect();

    let p_vertices = polytope_vertices(game, &LiftedRows::new(&b_rows), &p_constraints, m, Polytope::P)?;
    let q_vertices = polytope_vertices(game, &LiftedRows::new(&a_rows), &q_constraints, n, Polytope::Q)?;
    Ok(VertexTable {
        m,
        n,
        p_vertices,
        q_vertices,
        candidates_examined: candidates,
        oversized: candidates > limit,
    })
}

#[derive(Clone, Copy)]
enum Constraint {
    /// Coordinate is zero.
    Zero(usize),
    /// Row of the payoff system is tight.
    Row(usize),
}

/// Rows `g . v <= 1` scaled to integers `g' . v <= h`.
struct LiftedRows {
    rows: Vec<Vec<BigInt>>,
    rhs: Vec<BigInt>,
}

impl LiftedRows {
    fn new(rows: &[Vec<Rational>]) -> Self {
        let (rows, rhs) = rows
            .iter()
            .map(|r| {
                let mut values = r.clone();
                values.push(Rational::one());
                let mut lifted = integer_lift(&values);
                let h = lifted.pop().expect("rhs entry");
                (lifted, h)
            })
            .unzip();
        LiftedRows { rows, rhs }
    }
}

/// Vertices from every `dim`-subset of constraints, solved by Cramer's rule
/// in integers. Rationals are built only for feasible points.
fn polytope_vertices(
    game: &BimatrixGame,
    lifted: &LiftedRows,
    constraints: &[Constraint],
    dim: usize,
    polytope: Polytope,
) -> Result<Vec<LabeledPoint>> {
    let mut seen: BTreeMap<Vec<Rational>, LabeledPoint> = BTreeMap::new();
    for subset in combinations(constraints.len(), dim) {
        let mut free = vec![true; dim];
        let mut tight = Vec::new();
        for &l in &subset {
            match constraints[l] {
                Constraint::Zero(c) => free[c] = false,
                Constraint::Row(r) => tight.push(r),
            }
        }
        if tight.is_empty() {
            continue;
        }
        let free: Vec<usize> = (0..dim).filter(|&c| free[c]).collect();
        let system: Vec<Vec<BigInt>> = tight
            .iter()
            .map(|&r| free.iter().map(|&c| lifted.rows[r][c].clone()).collect())
            .collect();
        let mut det = integer_determinant(system.clone());
        if det.is_zero() {
            continue;
        }
        let mut numer: Vec<BigInt> = (0..free.len())
            .map(|k| {
                let mut replaced = system.clone();
                for (row, &r) in replaced.iter_mut().zip(&tight) {
                    row[k] = lifted.rhs[r].clone();
                }
                integer_determinant(replaced)
            })
            .collect();
        if det.is_negative() {
            det = -det;
            numer.iter_mut().for_each(|x| *x = -&*x);
        }
        if numer.iter().any(Signed::is_negative) {
            continue;
        }
        let feasible = lifted.rows.iter().zip(&lifted.rhs).all(|(row, h)| {
            let lhs: BigInt = free.iter().zip(&numer).map(|(&c, x)| &row[c] * x).sum();
            lhs <= h * &det
        });
        if !feasible {
            continue;
        }
        let mut point = vec![Rational::zero(); dim];
        for (&c, x) in free.iter().zip(numer) {
            point[c] = Rational::new(x, det.clone());
        }
        if point.iter().all(Zero::is_zero) || seen.contains_key(&point) {
            continue;
        }
        let lp = labels_of(game, &point, polytope)?;
        seen.insert(point, lp);
    }
    Ok(seen.into_values().collect())
}

/// Vertex pairs whose labels jointly cover `1..=m+n`.
pub fn extreme_equilibria(table: &VertexTable) -> Vec<VertexPair> {
    let all = table.m + table.n;
    let mut pairs = Vec::new();
    for (p, pv) in table.p_vertices.iter().enumerate() {
        for (q, qv) in table.q_vertices.iter().enumerate() {
            if pv.labels.union(&qv.labels).count() == all {
                pairs.push(VertexPair { p, q });
            }
        }
    }
    pairs
}

/// Maximal complete bipartite subgraphs of the graph whose edges are the
/// completely labeled vertex pairs.
///
/// A biclique `U x V` is maximal exactly when `V` is the common
/// neighbourhood of `U` and `U` that of `V`. Every such `V` is an
/// intersection of neighbourhoods of single P-vertices, so closing under
/// intersection from the single neighbourhoods reaches all of them.
pub fn maximal_nash_subsets(pairs: &[VertexPair]) -> Vec<NashSubset> {
    let mut p_nbrs: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut q_nbrs: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for e in pairs {
        p_nbrs.entry(e.p).or_default().insert(e.q);
        q_nbrs.entry(e.q).or_default().insert(e.p);
    }
    let common = |side: &BTreeMap<usize, BTreeSet<usize>>, set: &BTreeSet<usize>| {
        let mut it = set.iter();
        let first = it.next().map(|v| side[v].clone()).unwrap_or_default();
        it.fold(first, |acc, v| acc.intersection(&side[v]).copied().collect())
    };

    let mut intents: BTreeSet<BTreeSet<usize>> = p_nbrs.values().cloned().collect();
    let mut frontier: Vec<BTreeSet<usize>> = intents.iter().cloned().collect();
    while let Some(v) = frontier.pop() {
        for nb in p_nbrs.values() {
            let meet: BTreeSet<usize> = v.intersection(nb).copied().collect();
            if !meet.is_empty() && intents.insert(meet.clone()) {
                frontier.push(meet);
            }
        }
    }

    let mut out: Vec<NashSubset> = intents
        .into_iter()
        .map(|v| {
            let u = common(&q_nbrs, &v);
            NashSubset {
                q_vertices: common(&p_nbrs, &u),
                p_vertices: u,
                maximal: true,
            }
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Groups maximal Nash subsets that share a vertex, transitively.
pub fn components(subsets: &[NashSubset]) -> Vec<Vec<NashSubset>> {
    let k = subsets.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..k {
        for j in i + 1..k {
            let touch = !subsets[i].p_vertices.is_disjoint(&subsets[j].p_vertices)
                || !subsets[i].q_vertices.is_disjoint(&subsets[j].q_vertices);
            if touch {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<NashSubset>> = BTreeMap::new();
    for (i, s) in subsets.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(s.clone());
    }
    groups.into_values().collect()
}

/// Scans the vertices of `P` and `Q` for more than `m` (resp. `n`) labels.
pub fn check_nondegeneracy(game: &BimatrixGame) -> Result<DegeneracyReport> {
    Ok(DegeneracyReport::from_table(&enumerate_vertices(game)?))
}

/// Mixed-strategy equilibrium of a vertex pair, payoffs measured in `game`.
pub fn rescale_pair(game: &BimatrixGame, table: &VertexTable, pair: VertexPair) -> Result<Equilibrium> {
    let (x, _) = rescale_to_strategy(&table.p_vertices[pair.p])?;
    let (y, _) = rescale_to_strategy(&table.q_vertices[pair.q])?;
    Ok(Equilibrium::new(game, x, y))
}

/// The complete equilibrium structure of a game.
#[derive(Clone, Debug)]
pub struct EquilibriumSet {
    /// Game actually enumerated, with the payoff shifts applied to reach it.
    pub normalized: crate::game::Normalized,
    pub table: VertexTable,
    pub pairs: Vec<VertexPair>,
    /// Extreme equilibria with payoffs in the original game, sorted.
    pub equilibria: Vec<Equilibrium>,
    pub subsets: Vec<NashSubset>,
    pub components: Vec<Vec<NashSubset>>,
    pub degeneracy: DegeneracyReport,
}

impl EquilibriumSet {
    /// Index into `equilibria` of the equilibrium for vertex pair `pair`.
    pub fn equilibrium_of(&self, pair: VertexPair) -> Option<usize> {
        let (x, _) = rescale_to_strategy(&self.table.p_vertices[pair.p]).ok()?;
        let (y, _) = rescale_to_strategy(&self.table.q_vertices[pair.q]).ok()?;
        self.equilibria.iter().position(|e| e.x == x && e.y == y)
    }
}

/// Vertex enumeration, extreme equilibria, maximal Nash subsets and
/// components in one pass. Works for degenerate games.
pub fn enumerate_equilibria(game: &BimatrixGame) -> Result<EquilibriumSet> {
    let normalized = polytope_form(game);
    let table = enumerate_vertices(&normalized.game)?;
    let pairs = extreme_equilibria(&table);
    let equilibria = sort_dedup(
        pairs
            .iter()
            .map(|&p| rescale_pair(game, &table, p))
            .collect::<Result<_>>()?,
    );
    let subsets = maximal_nash_subsets(&pairs);
    let components = components(&subsets);
    let degeneracy = DegeneracyReport::from_table(&table);
    Ok(EquilibriumSet {
        normalized,
        table,
        pairs,
        equilibria,
        subsets,
        components,
        degeneracy,
    })
}

/// Labels of a vertex as plain integers.
pub fn label_ids(labels: &BTreeSet<Label>) -> Vec<usize> {
    labels.iter().map(|l| l.0).collect()
}
