//! Bimatrix games, labels and the best-response polytopes
//! `P = {x >= 0, B^T x <= 1}` and `Q = {A y <= 1, y >= 0}`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Rational, RationalMatrix};

/// A two-player game: `a` pays the row player, `b` the column player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimatrixGame {
    a: RationalMatrix,
    b: RationalMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

/// A label in `1..=m+n`: `1..=m` are the rows, `m+1..=m+n` the columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub usize);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polytope {
    P,
    Q,
}

impl Polytope {
    pub fn symbol(self) -> char {
        match self {
            Polytope::P => 'P',
            Polytope::Q => 'Q',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedStrategy {
    probabilities: Vec<Rational>,
    owner: Player,
}

impl MixedStrategy {
    pub fn new(owner: Player, probabilities: Vec<Rational>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidStrategy("empty strategy".into()));
        }
        if probabilities.iter().any(Signed::is_negative) {
            return Err(Error::InvalidStrategy("negative probability".into()));
        }
        let total: Rational = probabilities.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidStrategy(format!("probabilities sum to {total}")));
        }
        Ok(MixedStrategy {
            probabilities,
            owner,
        })
    }

    pub fn pure(owner: Player, len: usize, index: usize) -> Self {
        let mut p = vec![Rational::zero(); len];
        p[index] = Rational::one();
        MixedStrategy {
            probabilities: p,
            owner,
        }
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_positive())
            .map(|(i, _)| i)
            .collect()
    }
}

/// A point of `P` or `Q` together with the labels of its binding inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledPoint {
    pub coordinates: Vec<Rational>,
    pub labels: BTreeSet<Label>,
    pub polytope: Polytope,
}

impl LabeledPoint {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }
}

/// A Nash equilibrium with payoffs `u` (row player) and `v` (column player).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equilibrium {
    pub x: MixedStrategy,
    pub y: MixedStrategy,
    pub u: Rational,
    pub v: Rational,
    pub support_x: BTreeSet<usize>,
    pub support_y: BTreeSet<usize>,
    pub index: Option<crate::exact::Sign>,
}

impl Equilibrium {
    /// Builds the record for `(x, y)`, with payoffs measured in `game`.
    /// Does not check the equilibrium property; see [`is_equilibrium`].
    pub fn new(game: &BimatrixGame, x: MixedStrategy, y: MixedStrategy) -> Self {
        let u = max_of(&game.row_payoffs(y.probabilities()));
        let v = max_of(&game.column_payoffs(x.probabilities()));
        Equilibrium {
            support_x: x.support(),
            support_y: y.support(),
            x,
            y,
            u,
            v,
            index: None,
        }
    }

    /// Sort key: lexicographic on `x` then `y`.
    pub fn sort_key(&self) -> (&[Rational], &[Rational]) {
        (self.x.probabilities(), self.y.probabilities())
    }

    /// Exact equality of the strategy pair, ignoring index and payoffs.
    pub fn same_profile(&self, other: &Equilibrium) -> bool {
        self.x == other.x && self.y == other.y
    }
}

pub(crate) fn max_of(values: &[Rational]) -> Rational {
    values.iter().max().cloned().unwrap_or_else(Rational::zero)
}

impl BimatrixGame {
    pub fn new(a: RationalMatrix, b: RationalMatrix) -> Result<Self> {
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::InvalidGame("a game needs at least one row and column".into()));
        }
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::InvalidGame(format!(
                "payoff matrices are {}x{} and {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Ok(BimatrixGame { a, b })
    }

    pub fn from_i64(a: &[&[i64]], b: &[&[i64]]) -> Result<Self> {
        Self::new(RationalMatrix::from_i64(a)?, RationalMatrix::from_i64(b)?)
    }

    /// Number of rows (pure strategies of player 1).
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Number of columns (pure strategies of player 2).
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &RationalMatrix {
        &self.a
    }

    pub fn b(&self) -> &RationalMatrix {
        &self.b
    }

    pub fn label_count(&self) -> usize {
        self.m() + self.n()
    }

    /// `A y`, the row player's payoff for each pure strategy.
    pub fn row_payoffs(&self, y: &[Rational]) -> Vec<Rational> {
        self.a.mul_vec(y).expect("y has n components")
    }

    /// `B^T x`, the column player's payoff for each pure strategy.
    pub fn column_payoffs(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.n())
            .map(|j| {
                (0..self.m())
                    .map(|i| self.b.get(i, j) * &x[i])
                    .fold(Rational::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    /// True when `A` and `B^T` are nonnegative without a zero column, so
    /// that `P` and `Q` are bounded polytopes.
    pub fn is_polytope_form(&self) -> bool {
        let (m, n) = (self.m(), self.n());
        let nonneg = |mat: &RationalMatrix| mat.entries().iter().all(|e| !e.is_negative());
        nonneg(&self.a)
            && nonneg(&self.b)
            && (0..n).all(|j| (0..m).any(|i| self.a.get(i, j).is_positive()))
            && (0..m).all(|i| (0..n).any(|j| self.b.get(i, j).is_positive()))
    }

    pub(crate) fn validate_label(&self, k: Label) -> Result<()> {
        if k.0 == 0 || k.0 > self.label_count() {
            return Err(Error::LabelOutOfRange {
                label: k.0,
                max: self.label_count(),
            });
        }
        Ok(())
    }
}

/// A game shifted so its polytopes are bounded, with the shifts applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub game: BimatrixGame,
    pub offset_a: Rational,
    pub offset_b: Rational,
}

impl Normalized {
    /// Payoff in the original game from a payoff in the shifted one.
    pub fn original_payoffs(&self, u: &Rational, v: &Rational) -> (Rational, Rational) {
        (u - &self.offset_a, v - &self.offset_b)
    }
}

/// Adds a constant to every entry of `A` (and separately of `B`) so that
/// all entries are at least one. Matrices already satisfying this are
/// left alone.
pub fn positivize(game: &BimatrixGame) -> Normalized {
    let offset = |m: &RationalMatrix| {
        let min = m.min_entry().cloned().unwrap_or_else(Rational::zero);
        if min >= Rational::one() {
            Rational::zero()
        } else {
            Rational::one() - min
        }
    };
    let offset_a = offset(game.a());
    let offset_b = offset(game.b());
    let shifted = BimatrixGame {
        a: game.a().shifted(&offset_a),
        b: game.b().shifted(&offset_b),
    };
    Normalized {
        game: shifted,
        offset_a,
        offset_b,
    }
}

/// The game itself when its polytopes are already bounded, otherwise
/// [`positivize`]. Equilibria are the same either way.
pub fn polytope_form(game: &BimatrixGame) -> Normalized {
    if game.is_polytope_form() {
        Normalized {
            game: game.clone(),
            offset_a: Rational::zero(),
            offset_b: Rational::zero(),
        }
    } else {
        positivize(game)
    }
}

/// Pure strategies of `player` (0-based) maximising payoff against the
/// opponent's mixed strategy `z`.
pub fn pure_best_responses(
    game: &BimatrixGame,
    player: Player,
    z: &MixedStrategy,
) -> Result<BTreeSet<usize>> {
    if z.owner() != player.opponent() {
        return Err(Error::InvalidStrategy(
            "best responses are taken against the opponent's strategy".into(),
        ));
    }
    let payoffs = match player {
        Player::One => {
            check_len(z, game.n())?;
            game.row_payoffs(z.probabilities())
        }
        Player::Two => {
            check_len(z, game.m())?;
            game.column_payoffs(z.probabilities())
        }
    };
    let best = max_of(&payoffs);
    Ok(payoffs
        .iter()
        .enumerate()
        .filter(|(_, p)| **p == best)
        .map(|(i, _)| i)
        .collect())
}

fn check_len(z: &MixedStrategy, len: usize) -> Result<()> {
    if z.len() != len {
        return Err(Error::LengthMismatch {
            left: len,
            right: z.len(),
        });
    }
    Ok(())
}

/// Each strategy's support lies within the pure best responses to the other.
pub fn is_equilibrium(game: &BimatrixGame, x: &MixedStrategy, y: &MixedStrategy) -> bool {
    if x.owner() != Player::One || y.owner() != Player::Two {
        return false;
    }
    let (Ok(br_x), Ok(br_y)) = (
        pure_best_responses(game, Player::One, y),
        pure_best_responses(game, Player::Two, x),
    ) else {
        return false;
    };
    x.support().is_subset(&br_x) && y.support().is_subset(&br_y)
}

/// Labels of a point of `P` (`x >= 0`, `B^T x <= 1`) or `Q` (`A y <= 1`, `y >= 0`).
pub fn labels_of(game: &BimatrixGame, point: &[Rational], polytope: Polytope) -> Result<LabeledPoint> {
    let (m, n) = (game.m(), game.n());
    let outside = |reason: String| Error::NotInPolytope {
        polytope: polytope.symbol(),
        reason,
    };
    let one = Rational::one();
    let mut labels = BTreeSet::new();
    // (own coordinates, label offset), (payoff rows, label offset)
    let (own_offset, other, other_offset) = match polytope {
        Polytope::P => {
            if point.len() != m {
                return Err(Error::LengthMismatch { left: m, right: point.len() });
            }
            (1, game.column_payoffs(point), m + 1)
        }
        Polytope::Q => {
            if point.len() != n {
                return Err(Error::LengthMismatch { left: n, right: point.len() });
            }
            (m + 1, game.row_payoffs(point), 1)
        }
    };
    for (i, c) in point.iter().enumerate() {
        if c.is_negative() {
            return Err(outside(format!("coordinate {} is negative", i + 1)));
        }
        if c.is_zero() {
            labels.insert(Label(own_offset + i));
        }
    }
    for (j, s) in other.iter().enumerate() {
        if *s > one {
            return Err(outside(format!("inequality {} is violated", other_offset + j)));
        }
        if *s == one {
            labels.insert(Label(other_offset + j));
        }
    }
    Ok(LabeledPoint {
        coordinates: point.to_vec(),
        labels,
        polytope,
    })
}

/// Projects a nonzero polytope point back to a mixed strategy; the returned
/// payoff is `1 / sum(coordinates)`, the opponent's best-response payoff.
pub fn rescale_to_strategy(point: &LabeledPoint) -> Result<(MixedStrategy, Rational)> {
    let total: Rational = point.coordinates.iter().sum();
    if total.is_zero() {
        return Err(Error::ArtificialEquilibrium);
    }
    let owner = match point.polytope {
        Polytope::P => Player::One,
        Polytope::Q => Player::Two,
    };
    let probabilities = point.coordinates.iter().map(|c| c / &total).collect();
    Ok((MixedStrategy::new(owner, probabilities)?, total.recip()))
}

/// Polytope point of a mixed strategy: `x / v` with `v` the opponent's
/// best-response payoff.
pub fn strategy_to_point(game: &BimatrixGame, s: &MixedStrategy) -> Result<Vec<Rational>> {
    let payoffs = match s.owner() {
        Player::One => game.column_payoffs(s.probabilities()),
        Player::Two => game.row_payoffs(s.probabilities()),
    };
    let best = max_of(&payoffs);
    if !best.is_positive() {
        return Err(Error::NotPolytopeForm);
    }
    Ok(s.probabilities().iter().map(|p| p / &best).collect())
}

/// The `(m+n) x (m+n)` matrix `[[0, A], [B^T, 0]]`.
pub fn symmetrize(game: &BimatrixGame) -> RationalMatrix {
    let (m, n) = (game.m(), game.n());
    let mut c = RationalMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            c.set(i, m + j, game.a().get(i, j).clone());
            c.set(m + j, i, game.b().get(i, j).clone());
        }
    }
    c
}

/// Shorthand for an integer-valued rational strategy vector in tests and examples.
pub fn strategy(owner: Player, probabilities: &[(i64, i64)]) -> Result<MixedStrategy> {
    MixedStrategy::new(
        owner,
        probabilities
            .iter()
            .map(|&(p, q)| crate::exact::rat(p, q))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::exact::rat;

    fn three_by_two() -> BimatrixGame {
        BimatrixGame::from_i64(&[&[3, 3], &[2, 5], &[0, 6]], &[&[3, 2], &[2, 4], &[3, 0]]).unwrap()
    }

    fn pt(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    fn labels(ls: &[usize]) -> BTreeSet<Label> {
        ls.iter().map(|&l| Label(l)).collect()
    }

    #[test]
    fn positivize_shifts_to_one() {
        let p = positivize(&three_by_two());
        assert_eq!(p.offset_a, int(1));
        assert_eq!(p.offset_b, int(1));
        assert_eq!(p.game.a().get(2, 0), &int(1));

        let g = BimatrixGame::from_i64(&[&[1, 2]], &[&[3, 1]]).unwrap();
        let p = positivize(&g);
        assert_eq!(p.game, g);
        assert!(p.offset_a.is_zero() && p.offset_b.is_zero());

        let g = BimatrixGame::from_i64(&[&[-5, 2]], &[&[3, 1]]).unwrap();
        assert_eq!(positivize(&g).offset_a, int(6));
    }

    #[test]
    fn polytope_form_keeps_nonnegative_game() {
        let g = three_by_two();
        assert!(g.is_polytope_form());
        assert_eq!(polytope_form(&g).game, g);
        let zero_col = BimatrixGame::from_i64(&[&[0, 1]], &[&[1, 1]]).unwrap();
        assert!(!zero_col.is_polytope_form());
    }

    #[test]
    fn best_responses() {
        let g = three_by_two();
        let y = strategy(Player::Two, &[(1, 3), (2, 3)]).unwrap();
        assert_eq!(g.row_payoffs(y.probabilities()), pt(&[(3, 1), (4, 1), (4, 1)]));
        assert_eq!(pure_best_responses(&g, Player::One, &y).unwrap(), [1, 2].into());
        let y = strategy(Player::Two, &[(1, 2), (1, 2)]).unwrap();
        assert_eq!(pure_best_responses(&g, Player::One, &y).unwrap(), [1].into());
        let x = strategy(Player::One, &[(0, 1), (3, 5), (2, 5)]).unwrap();
        assert_eq!(pure_best_responses(&g, Player::Two, &x).unwrap(), [0, 1].into());
        assert_eq!(max_of(&g.column_payoffs(x.probabilities())), rat(12, 5));
        assert!(pure_best_responses(&g, Player::Two, &y).is_err());
    }

    #[test]
    fn equilibrium_checks() {
        let g = three_by_two();
        let x = strategy(Player::One, &[(0, 1), (3, 5), (2, 5)]).unwrap();
        let y = strategy(Player::Two, &[(1, 3), (2, 3)]).unwrap();
        assert!(is_equilibrium(&g, &x, &y));
        let x = strategy(Player::One, &[(2, 3), (1, 3), (0, 1)]).unwrap();
        let y = strategy(Player::Two, &[(2, 3), (1, 3)]).unwrap();
        assert!(is_equilibrium(&g, &x, &y));
        let x = MixedStrategy::pure(Player::One, 3, 0);
        let y = MixedStrategy::pure(Player::Two, 2, 1);
        assert!(!is_equilibrium(&g, &x, &y));
    }

    #[test]
    fn labels_on_polytope_vertices() {
        let g = three_by_two();
        let b = labels_of(&g, &pt(&[(1, 4), (1, 8), (0, 1)]), Polytope::P).unwrap();
        assert_eq!(b.labels, labels(&[3, 4, 5]));
        let o = labels_of(&g, &pt(&[(0, 1), (0, 1), (0, 1)]), Polytope::P).unwrap();
        assert_eq!(o.labels, labels(&[1, 2, 3]));
        let c = labels_of(&g, &pt(&[(1, 12), (1, 6)]), Polytope::Q).unwrap();
        assert_eq!(c.labels, labels(&[2, 3]));
        assert!(matches!(
            labels_of(&g, &pt(&[(1, 1), (0, 1), (0, 1)]), Polytope::P),
            Err(Error::NotInPolytope { .. })
        ));
        assert!(labels_of(&g, &pt(&[(-1, 100), (0, 1), (0, 1)]), Polytope::P).is_err());
    }

    #[test]
    fn rescaling() {
        let g = three_by_two();
        let c = labels_of(&g, &pt(&[(1, 12), (1, 6)]), Polytope::Q).unwrap();
        let (y, u) = rescale_to_strategy(&c).unwrap();
        assert_eq!(y.probabilities(), pt(&[(1, 3), (2, 3)]).as_slice());
        assert_eq!(u, int(4));
        let a = labels_of(&g, &pt(&[(0, 1), (1, 4), (1, 6)]), Polytope::P).unwrap();
        let (x, v) = rescale_to_strategy(&a).unwrap();
        assert_eq!(x.probabilities(), pt(&[(0, 1), (3, 5), (2, 5)]).as_slice());
        assert_eq!(v, rat(12, 5));
        let d = labels_of(&g, &pt(&[(2, 9), (1, 9)]), Polytope::Q).unwrap();
        let (y, u) = rescale_to_strategy(&d).unwrap();
        assert_eq!(y.probabilities(), pt(&[(2, 3), (1, 3)]).as_slice());
        assert_eq!(u, int(3));
        assert_eq!(strategy_to_point(&g, &y).unwrap(), pt(&[(2, 9), (1, 9)]));

        let zero = labels_of(&g, &pt(&[(0, 1), (0, 1)]), Polytope::Q).unwrap();
        assert!(matches!(rescale_to_strategy(&zero), Err(Error::ArtificialEquilibrium)));
    }

    #[test]
    fn symmetrize_blocks() {
        let g = BimatrixGame::from_i64(&[&[2]], &[&[3]]).unwrap();
        assert_eq!(symmetrize(&g), RationalMatrix::from_i64(&[&[0, 2], &[3, 0]]).unwrap());
        let c = symmetrize(&three_by_two());
        assert_eq!(c.rows(), 5);
        assert_eq!(c.get(1, 4), &int(5));
        assert_eq!(c.get(4, 1), &int(4));
        assert!(c.get(0, 1).is_zero() && c.get(3, 4).is_zero());
    }

    #[test]
    fn invalid_inputs() {
        assert!(MixedStrategy::new(Player::One, pt(&[(1, 2), (1, 3)])).is_err());
        assert!(MixedStrategy::new(Player::One, pt(&[(3, 2), (-1, 2)])).is_err());
        let a = RationalMatrix::zeros(2, 2);
        let b = RationalMatrix::zeros(2, 3);
        assert!(BimatrixGame::new(a, b).is_err());
    }
}
