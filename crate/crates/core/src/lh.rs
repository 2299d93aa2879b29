//! Lemke-Howson complementary pivoting on the symmetrized polytope
//! `S = {z >= 0, C z <= 1}`, equilibrium indices, and Lemke's method for
//! general linear complementarity problems.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::enumeration::{check_nondegeneracy, DegeneracyReport};
use crate::error::{Error, Result};
use crate::exact::{det_sign, Rational, RationalMatrix, Sign};
use crate::game::{
    is_equilibrium, labels_of, rescale_to_strategy, strategy_to_point, symmetrize, BimatrixGame,
    Equilibrium, Label, Polytope,
};
use crate::tableau::{PivotRecord, RatioTest, Tableau, VarId};

/// Called after every pivot with the updated tableau.
pub type PivotObserver<'a> = &'a mut dyn FnMut(&Tableau, &PivotRecord);

fn ignore(_: &Tableau, _: &PivotRecord) {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    /// The origin of `S`; not a strategy pair.
    Artificial,
    Equilibrium(Box<Equilibrium>),
}

impl Endpoint {
    pub fn equilibrium(&self) -> Option<&Equilibrium> {
        match self {
            Endpoint::Artificial => None,
            Endpoint::Equilibrium(e) => Some(e),
        }
    }

    pub fn is_artificial(&self) -> bool {
        matches!(self, Endpoint::Artificial)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LhPath {
    pub missing_label: Label,
    pub steps: Vec<PivotRecord>,
    pub start: Endpoint,
    pub end: Endpoint,
}

impl LhPath {
    /// Each entering variable is the complement of the one that left before it.
    pub fn is_complementary(&self) -> bool {
        self.steps
            .windows(2)
            .all(|w| w[0].leaving.complement() == Some(w[1].entering))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedEquilibrium {
    pub equilibrium: Equilibrium,
    pub index: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcpProblem {
    pub c: RationalMatrix,
    pub q: Vec<Rational>,
}

impl LcpProblem {
    pub fn new(c: RationalMatrix, q: Vec<Rational>) -> Result<Self> {
        if !c.is_square() || c.rows() != q.len() {
            return Err(Error::Dimension(format!(
                "C is {}x{}, q has {} entries",
                c.rows(),
                c.cols(),
                q.len()
            )));
        }
        Ok(LcpProblem { c, q })
    }

    /// `z >= 0`, `w = q - C z >= 0` and `z^T w = 0`, exactly.
    pub fn is_solution(&self, z: &[Rational]) -> bool {
        let Ok(cz) = self.c.mul_vec(z) else {
            return false;
        };
        let w: Vec<Rational> = self.q.iter().zip(&cz).map(|(q, c)| q - c).collect();
        z.iter().chain(&w).all(|v| !v.is_negative())
            && z.iter().zip(&w).all(|(a, b)| (a * b).is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemkeOutcome {
    Solution {
        z: Vec<Rational>,
        w: Vec<Rational>,
        steps: Vec<PivotRecord>,
    },
    RayTermination {
        steps: Vec<PivotRecord>,
    },
}

enum RunEnd {
    Terminal,
    Ray,
}

/// Complementary pivoting from the current basis until `stop` accepts a
/// leaving variable or the entering column is unbounded.
fn complementary_pivoting(
    t: &mut Tableau,
    first: VarId,
    stop: impl Fn(VarId) -> bool,
    steps: &mut Vec<PivotRecord>,
    observer: PivotObserver<'_>,
) -> Result<RunEnd> {
    let mut visited: HashSet<Vec<VarId>> = HashSet::new();
    let basis_key = |t: &Tableau| {
        let mut b = t.basis().to_vec();
        b.sort();
        b
    };
    visited.insert(basis_key(t));
    let mut entering = first;
    loop {
        let leaving = match t.lexico_ratio_test(entering)? {
            RatioTest::Blocked => return Ok(RunEnd::Ray),
            RatioTest::Leaving { var, .. } => var,
        };
        t.pivot(entering, leaving)?;
        let record = PivotRecord {
            step: steps.len() + 1,
            entering,
            leaving,
            det: t.det().clone(),
        };
        observer(t, &record);
        steps.push(record);
        assert!(visited.insert(basis_key(t)), "complementary pivoting revisited a basis");
        if stop(leaving) {
            return Ok(RunEnd::Terminal);
        }
        entering = leaving
            .complement()
            .ok_or_else(|| Error::Tableau("z0 left without stopping".into()))?;
    }
}

/// Result of a Lemke-Howson run on a labeled polytope `S`.
#[derive(Clone, Debug)]
pub struct SymmetricRun {
    pub z: Vec<Rational>,
    pub steps: Vec<PivotRecord>,
    pub tableau: Tableau,
}

/// Lemke-Howson on `S = {z >= 0, C z <= 1}` from the origin with missing
/// label `k` (1-based).
pub fn lh_symmetric(c: &RationalMatrix, k: usize) -> Result<SymmetricRun> {
    lh_symmetric_observed(c, k, &mut ignore)
}

pub fn lh_symmetric_observed(c: &RationalMatrix, k: usize, observer: PivotObserver<'_>) -> Result<SymmetricRun> {
    let d = c.rows();
    if k == 0 || k > d {
        return Err(Error::LabelOutOfRange { label: k, max: d });
    }
    let mut t = Tableau::new(c, &vec![Rational::one(); d], None)?;
    let mut steps = Vec::new();
    let stop = |v: VarId| v == VarId::W(k) || v == VarId::Z(k);
    match complementary_pivoting(&mut t, VarId::Z(k), stop, &mut steps, observer)? {
        RunEnd::Terminal => Ok(SymmetricRun {
            z: t.basic_solution(),
            steps,
            tableau: t,
        }),
        RunEnd::Ray => Err(Error::NotPolytopeForm),
    }
}

fn require_polytope_form(game: &BimatrixGame) -> Result<()> {
    if game.is_polytope_form() {
        Ok(())
    } else {
        Err(Error::NotPolytopeForm)
    }
}

/// Splits a point of `S` into its `P` and `Q` parts and rescales both.
fn endpoint_of(game: &BimatrixGame, z: &[Rational]) -> Result<Endpoint> {
    if z.iter().all(Zero::is_zero) {
        return Ok(Endpoint::Artificial);
    }
    let m = game.m();
    let p = labels_of(game, &z[..m], Polytope::P)?;
    let q = labels_of(game, &z[m..], Polytope::Q)?;
    let (x, _) = rescale_to_strategy(&p)?;
    let (y, _) = rescale_to_strategy(&q)?;
    Ok(Endpoint::Equilibrium(Box::new(Equilibrium::new(game, x, y))))
}

/// Lemke-Howson from the artificial equilibrium with missing label `k`.
/// The game must already have bounded best-response polytopes.
pub fn lh_solve(game: &BimatrixGame, k: Label) -> Result<(Equilibrium, LhPath)> {
    lh_solve_observed(game, k, &mut ignore)
}

pub fn lh_solve_observed(
    game: &BimatrixGame,
    k: Label,
    observer: PivotObserver<'_>,
) -> Result<(Equilibrium, LhPath)> {
    require_polytope_form(game)?;
    game.validate_label(k)?;
    let run = lh_symmetric_observed(&symmetrize(game), k.0, observer)?;
    let end = endpoint_of(game, &run.z)?;
    let Endpoint::Equilibrium(e) = &end else {
        return Err(Error::Tableau("path from the origin returned to the origin".into()));
    };
    let e = (**e).clone();
    Ok((
        e,
        LhPath {
            missing_label: k,
            steps: run.steps,
            start: Endpoint::Artificial,
            end,
        },
    ))
}

/// Point of `S` for an equilibrium: `(x / v, y / u)`.
pub fn equilibrium_point(game: &BimatrixGame, e: &Equilibrium) -> Result<Vec<Rational>> {
    let mut z = strategy_to_point(game, &e.x)?;
    z.extend(strategy_to_point(game, &e.y)?);
    Ok(z)
}

/// Nonbasic variables (binding inequalities) at a point of `S`; one per
/// label when the point is a nondegenerate completely labeled vertex.
fn binding_variables(c: &RationalMatrix, z: &[Rational]) -> Result<Vec<Vec<VarId>>> {
    let cz = c.mul_vec(z)?;
    let one = Rational::one();
    Ok((0..z.len())
        .map(|i| {
            let mut vs = Vec::new();
            if z[i].is_zero() {
                vs.push(VarId::Z(i + 1));
            }
            if cz[i] == one {
                vs.push(VarId::W(i + 1));
            }
            vs
        })
        .collect())
}

fn degeneracy_at(game: &BimatrixGame, z: &[Rational]) -> Error {
    let m = game.m();
    let witnesses = [
        labels_of(game, &z[..m], Polytope::P).ok().filter(|p| p.labels.len() > m),
        labels_of(game, &z[m..], Polytope::Q).ok().filter(|q| q.labels.len() > game.n()),
    ]
    .into_iter()
    .flatten()
    .collect();
    Error::Degenerate(Box::new(DegeneracyReport {
        degenerate: true,
        witnesses,
    }))
}

/// Lemke-Howson with missing label `k` started from the basis of `start`,
/// a nondegenerate equilibrium. May end at the artificial equilibrium.
pub fn lh_from(game: &BimatrixGame, start: &Equilibrium, k: Label) -> Result<(Endpoint, LhPath)> {
    lh_from_observed(game, start, k, &mut ignore)
}

pub fn lh_from_observed(
    game: &BimatrixGame,
    start: &Equilibrium,
    k: Label,
    observer: PivotObserver<'_>,
) -> Result<(Endpoint, LhPath)> {
    require_polytope_form(game)?;
    game.validate_label(k)?;
    if !is_equilibrium(game, &start.x, &start.y) {
        return Err(Error::NotAnEquilibrium);
    }
    let c = symmetrize(game);
    let d = c.rows();
    let z = equilibrium_point(game, start)?;
    let binding = binding_variables(&c, &z)?;
    if binding.iter().any(|b| b.len() != 1) {
        return Err(degeneracy_at(game, &z));
    }
    let nonbasic: Vec<VarId> = binding.into_iter().flatten().collect();
    let basis: Vec<VarId> = nonbasic
        .iter()
        .map(|v| v.complement().expect("no z0 here"))
        .collect();

    let mut t = Tableau::new(&c, &vec![Rational::one(); d], None)?;
    t.move_to_basis(&basis)?;
    let first = nonbasic[k.0 - 1];
    let mut steps = Vec::new();
    let stop = |v: VarId| v == VarId::W(k.0) || v == VarId::Z(k.0);
    if let RunEnd::Ray = complementary_pivoting(&mut t, first, stop, &mut steps, observer)? {
        return Err(Error::NotPolytopeForm);
    }
    let end = endpoint_of(game, &t.basic_solution())?;
    Ok((
        end.clone(),
        LhPath {
            missing_label: k,
            steps,
            start: Endpoint::Equilibrium(Box::new(start.clone())),
            end,
        },
    ))
}

/// Outcome of running Lemke-Howson for every missing label.
#[derive(Clone, Debug)]
pub struct LabelSweep {
    /// Distinct endpoints, sorted; indices attached when the game is nondegenerate.
    pub equilibria: Vec<Equilibrium>,
    pub paths: Vec<LhPath>,
    pub degenerate: bool,
}

pub fn lh_all_labels(game: &BimatrixGame) -> Result<LabelSweep> {
    require_polytope_form(game)?;
    let degenerate = check_nondegeneracy(game)?.degenerate;
    let mut equilibria: Vec<Equilibrium> = Vec::new();
    let mut paths = Vec::new();
    for k in 1..=game.label_count() {
        let (e, path) = lh_solve(game, Label(k))?;
        if !equilibria.iter().any(|f| f.same_profile(&e)) {
            equilibria.push(e);
        }
        paths.push(path);
    }
    if !degenerate {
        for e in &mut equilibria {
            e.index = Some(index(game, e)?);
        }
    }
    equilibria.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(LabelSweep {
        equilibria,
        paths,
        degenerate,
    })
}

/// Normal vector of the inequality whose slack is `v`, with `z >= 0`
/// written as `-z <= 0`.
pub fn binding_normal(c: &RationalMatrix, v: VarId) -> Vec<Rational> {
    match v {
        VarId::Z(i) => {
            let mut e = vec![Rational::zero(); c.rows()];
            e[i - 1] = -Rational::one();
            e
        }
        VarId::W(i) => c.row(i - 1).to_vec(),
        VarId::Z0 => panic!("z0 has no inequality in S"),
    }
}

/// Index of a completely labeled vertex `z` of `S = {z >= 0, C z <= 1}`:
/// `(-1)^(d+1)` times the sign of the determinant of the binding normals
/// ordered by label.
pub fn index_of_point(c: &RationalMatrix, z: &[Rational]) -> Result<Sign> {
    let d = c.rows();
    let binding = binding_variables(c, z)?;
    let missing: Vec<usize> = (1..=d).filter(|&i| binding[i - 1].is_empty()).collect();
    if !missing.is_empty() {
        return Err(Error::NotCompletelyLabeled { missing });
    }
    if binding.iter().any(|b| b.len() > 1) {
        return Err(Error::Tableau("index is undefined at a degenerate vertex".into()));
    }
    let columns: Vec<Vec<Rational>> = binding.iter().map(|b| binding_normal(c, b[0])).collect();
    let sign = det_sign(&RationalMatrix::from_columns(&columns)?)?;
    if sign == Sign::Zero {
        return Err(Error::Tableau("binding normals are linearly dependent".into()));
    }
    Ok(if d.is_multiple_of(2) { -sign } else { sign })
}

/// Index of an equilibrium of a nondegenerate game, computed in the
/// symmetrized coordinates.
pub fn index(game: &BimatrixGame, e: &Equilibrium) -> Result<Sign> {
    require_polytope_form(game)?;
    if !is_equilibrium(game, &e.x, &e.y) {
        return Err(Error::NotAnEquilibrium);
    }
    let z = equilibrium_point(game, e)?;
    let c = symmetrize(game);
    if binding_variables(&c, &z)?.iter().any(|b| b.len() > 1) {
        return Err(degeneracy_at(game, &z));
    }
    index_of_point(&c, &z)
}

/// Index of an LH endpoint; the artificial equilibrium counts as -1.
pub fn endpoint_index(game: &BimatrixGame, end: &Endpoint) -> Result<Sign> {
    match end {
        Endpoint::Artificial => Ok(Sign::Negative),
        Endpoint::Equilibrium(e) => index(game, e),
    }
}

/// Whether the two ends of `path` carry opposite indices. Refuses a path
/// with a degenerate endpoint, where the index is undefined; the statement
/// itself needs a nondegenerate game.
pub fn verify_opposite_index(game: &BimatrixGame, path: &LhPath) -> Result<bool> {
    Ok(endpoint_index(game, &path.start)? == -endpoint_index(game, &path.end)?)
}

/// Lemke's method with covering vector `covering > 0`.
pub fn lemke_lcp(problem: &LcpProblem, covering: &[Rational]) -> Result<LemkeOutcome> {
    lemke_lcp_observed(problem, covering, &mut ignore)
}

pub fn lemke_lcp_observed(
    problem: &LcpProblem,
    covering: &[Rational],
    observer: PivotObserver<'_>,
) -> Result<LemkeOutcome> {
    let d = problem.q.len();
    if covering.len() != d {
        return Err(Error::LengthMismatch { left: d, right: covering.len() });
    }
    if !covering.iter().all(Signed::is_positive) {
        return Err(Error::Tableau("covering vector must be strictly positive".into()));
    }
    if problem.q.iter().all(|q| !q.is_negative()) {
        return Ok(LemkeOutcome::Solution {
            z: vec![Rational::zero(); d],
            w: problem.q.clone(),
            steps: Vec::new(),
        });
    }
    let mut t = Tableau::new(&problem.c, &problem.q, Some(covering))?;
    let leaving = t
        .lemke_entry_test()?
        .leaving()
        .expect("entry test always selects a row");
    t.pivot(VarId::Z0, leaving)?;
    let record = PivotRecord {
        step: 1,
        entering: VarId::Z0,
        leaving,
        det: t.det().clone(),
    };
    observer(&t, &record);
    let mut steps = vec![record];
    let first = leaving.complement().expect("a slack left");
    match complementary_pivoting(&mut t, first, |v| v == VarId::Z0, &mut steps, observer)? {
        RunEnd::Terminal => Ok(LemkeOutcome::Solution {
            z: t.basic_solution(),
            w: t.slack_solution(),
            steps,
        }),
        RunEnd::Ray => Ok(LemkeOutcome::RayTermination { steps }),
    }
}

/// Complementary pivoting on an LCP with `q >= 0`, where the origin is a
/// trivial solution: `z_k` is forced into the basis first and pivoting
/// continues until `w_k` or `z_k` leaves. For the bimatrix LCP this is the
/// Lemke-Howson path for missing label `k`.
pub fn lemke_forced_start(problem: &LcpProblem, k: usize) -> Result<LemkeOutcome> {
    let d = problem.q.len();
    if k == 0 || k > d {
        return Err(Error::LabelOutOfRange { label: k, max: d });
    }
    if problem.q.iter().any(Signed::is_negative) {
        return Err(Error::Tableau("forced start needs q >= 0".into()));
    }
    let mut t = Tableau::new(&problem.c, &problem.q, None)?;
    let mut steps = Vec::new();
    let stop = |v: VarId| v == VarId::W(k) || v == VarId::Z(k);
    match complementary_pivoting(&mut t, VarId::Z(k), stop, &mut steps, &mut ignore)? {
        RunEnd::Terminal => Ok(LemkeOutcome::Solution {
            z: t.basic_solution(),
            w: t.slack_solution(),
            steps,
        }),
        RunEnd::Ray => Ok(LemkeOutcome::RayTermination { steps }),
    }
}
