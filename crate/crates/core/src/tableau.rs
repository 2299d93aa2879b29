//! Integer-pivoting dictionary for `I w + C z (- d z0) = q`.
//!
//! The tableau keeps `det(A_B) * A_B^{-1} [q | I | C | -d]` with every entry
//! an integer, together with the basis determinant. The `w` columns of the
//! stored matrix are `det(A_B) * A_B^{-1}`, which is exactly what the
//! lexicographic ratio test reads; no perturbation is ever substituted.
//!
//! Rows of `C` with fractional entries are scaled by their own common
//! denominator `s_i`, so the stored slack for row `i` is `s_i * w_i`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{common_denominator, Rational, RationalMatrix};

/// A variable of the system: slack `w_i`, original `z_i` (both 1-based), or
/// Lemke's artificial `z0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    W(usize),
    Z(usize),
    Z0,
}

impl VarId {
    pub fn complement(self) -> Option<VarId> {
        match self {
            VarId::W(i) => Some(VarId::Z(i)),
            VarId::Z(i) => Some(VarId::W(i)),
            VarId::Z0 => None,
        }
    }

    /// Label carried by the inequality this variable is the slack of.
    pub fn label(self) -> Option<usize> {
        match self {
            VarId::W(i) | VarId::Z(i) => Some(i),
            VarId::Z0 => None,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::W(i) => write!(f, "w{i}"),
            VarId::Z(i) => write!(f, "z{i}"),
            VarId::Z0 => f.write_str("z0"),
        }
    }
}

/// One exchange of the basis. `det` is the basis determinant afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotRecord {
    pub step: usize,
    pub entering: VarId,
    pub leaving: VarId,
    pub det: BigInt,
}

impl fmt::Display for PivotRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pivot {}: in={} out={} det={}",
            self.step, self.entering, self.leaving, self.det
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatioTest {
    /// The entering column has no positive entry.
    Blocked,
    Leaving {
        var: VarId,
        row: usize,
        /// The plain ratio `q_i / a_ij` was tied and the lexicographic
        /// columns decided.
        resolved_tie: bool,
    },
}

impl RatioTest {
    pub fn is_blocked(&self) -> bool {
        matches!(self, RatioTest::Blocked)
    }

    pub fn leaving(&self) -> Option<VarId> {
        match self {
            RatioTest::Blocked => None,
            RatioTest::Leaving { var, .. } => Some(*var),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    d: usize,
    has_z0: bool,
    basis: Vec<VarId>,
    rows: Vec<Vec<BigInt>>,
    det: BigInt,
    system: Vec<Vec<BigInt>>,
    row_scale: Vec<BigInt>,
}

impl Tableau {
    /// Slack basis `w = q`, `z = 0`. With `covering`, a `z0` column `-d` is
    /// appended for Lemke's method.
    pub fn new(c: &RationalMatrix, q: &[Rational], covering: Option<&[Rational]>) -> Result<Self> {
        let d = c.rows();
        if !c.is_square() {
            return Err(Error::Dimension(format!("C is {}x{}", c.rows(), c.cols())));
        }
        if q.len() != d {
            return Err(Error::LengthMismatch { left: d, right: q.len() });
        }
        if let Some(cov) = covering {
            if cov.len() != d {
                return Err(Error::LengthMismatch { left: d, right: cov.len() });
            }
        }
        let width = 2 * d + 1 + usize::from(covering.is_some());
        let mut system = Vec::with_capacity(d);
        let mut row_scale = Vec::with_capacity(d);
        for i in 0..d {
            let mut values: Vec<&Rational> = c.row(i).iter().collect();
            values.push(&q[i]);
            if let Some(cov) = covering {
                values.push(&cov[i]);
            }
            let s = common_denominator(values);
            let lift = |r: &Rational| r.numer() * (&s / r.denom());
            let mut row = vec![BigInt::zero(); width];
            row[0] = lift(&q[i]);
            row[1 + i] = BigInt::one();
            for j in 0..d {
                row[1 + d + j] = lift(c.get(i, j));
            }
            if let Some(cov) = covering {
                row[2 * d + 1] = -lift(&cov[i]);
            }
            system.push(row);
            row_scale.push(s);
        }
        Ok(Tableau {
            d,
            has_z0: covering.is_some(),
            basis: (1..=d).map(VarId::W).collect(),
            rows: system.clone(),
            det: BigInt::one(),
            system,
            row_scale,
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &[VarId] {
        &self.basis
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn has_z0(&self) -> bool {
        self.has_z0
    }

    pub fn is_basic(&self, v: VarId) -> bool {
        self.basis.contains(&v)
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vars: Vec<VarId> = (1..=self.d).map(VarId::W).chain((1..=self.d).map(VarId::Z)).collect();
        if self.has_z0 {
            vars.push(VarId::Z0);
        }
        vars
    }

    pub fn nonbasic(&self) -> Vec<VarId> {
        self.variables()
            .into_iter()
            .filter(|v| !self.is_basic(*v))
            .collect()
    }

    fn column(&self, v: VarId) -> Result<usize> {
        match v {
            VarId::W(i) if (1..=self.d).contains(&i) => Ok(i),
            VarId::Z(i) if (1..=self.d).contains(&i) => Ok(self.d + i),
            VarId::Z0 if self.has_z0 => Ok(2 * self.d + 1),
            _ => Err(Error::Tableau(format!("no variable {v} in this tableau"))),
        }
    }

    fn row_of(&self, v: VarId) -> Option<usize> {
        self.basis.iter().position(|b| *b == v)
    }

    /// Stored integer entry (scaled by `det`) of `v`'s column in basis row `row`.
    pub fn entry(&self, row: usize, v: VarId) -> Result<&BigInt> {
        Ok(&self.rows[row][self.column(v)?])
    }

    /// Scaled right-hand side of basis row `row`.
    pub fn rhs(&self, row: usize) -> &BigInt {
        &self.rows[row][0]
    }

    /// Compares rows `r` and `s` by `(q_r, A_B^{-1} row r) / a_r` against
    /// the same for `s`, with `a` the entries of column `col`. Both entries
    /// must have the same sign.
    fn lex_ratio_cmp(&self, r: usize, s: usize, col: usize) -> Ordering {
        let (ar, as_) = (&self.rows[r][col], &self.rows[s][col]);
        std::iter::once(0)
            .chain(1..=self.d)
            .map(|j| (&self.rows[r][j] * as_).cmp(&(&self.rows[s][j] * ar)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    fn lex_min_row(&self, candidates: &[usize], col: usize) -> (usize, bool) {
        let mut best = candidates[0];
        for &r in &candidates[1..] {
            match self.lex_ratio_cmp(r, best, col) {
                Ordering::Less => best = r,
                Ordering::Equal => panic!(
                    "lexicographic tie between rows {r} and {best}: basis inverse lost full rank"
                ),
                Ordering::Greater => {}
            }
        }
        let plain_tie = candidates.iter().any(|&r| {
            r != best
                && &self.rows[r][0] * &self.rows[best][col] == &self.rows[best][0] * &self.rows[r][col]
        });
        (best, plain_tie)
    }

    /// Lexicographic minimum ratio test for `entering`.
    pub fn lexico_ratio_test(&self, entering: VarId) -> Result<RatioTest> {
        let col = self.column(entering)?;
        if self.is_basic(entering) {
            return Err(Error::Tableau(format!("{entering} is already basic")));
        }
        let candidates: Vec<usize> = (0..self.d)
            .filter(|&r| self.rows[r][col].is_positive())
            .collect();
        if candidates.is_empty() {
            return Ok(RatioTest::Blocked);
        }
        let (row, resolved_tie) = self.lex_min_row(&candidates, col);
        Ok(RatioTest::Leaving {
            var: self.basis[row],
            row,
            resolved_tie,
        })
    }

    /// Leaving variable when `z0` first enters: the row that is most
    /// infeasible relative to the covering vector, decided lexicographically.
    pub fn lemke_entry_test(&self) -> Result<RatioTest> {
        let col = self.column(VarId::Z0)?;
        if self.is_basic(VarId::Z0) {
            return Err(Error::Tableau("z0 is already basic".into()));
        }
        // The z0 column holds -d < 0; ordering by row / |a| equals ordering
        // by row / a reversed, so take the lexicographic maximum of row / a.
        let mut best = 0;
        for r in 1..self.d {
            match self.lex_ratio_cmp(r, best, col) {
                Ordering::Greater => best = r,
                Ordering::Equal => panic!("lexicographic tie in Lemke entry step"),
                Ordering::Less => {}
            }
        }
        Ok(RatioTest::Leaving {
            var: self.basis[best],
            row: best,
            resolved_tie: false,
        })
    }

    /// Exchanges `entering` for `leaving` by integer pivoting.
    ///
    /// Panics if an integer division is inexact; that can only mean the
    /// stored tableau is corrupt.
    pub fn pivot(&mut self, entering: VarId, leaving: VarId) -> Result<()> {
        let col = self.column(entering)?;
        self.column(leaving)?;
        if self.is_basic(entering) {
            return Err(Error::Tableau(format!("{entering} is already basic")));
        }
        let Some(r) = self.row_of(leaving) else {
            return Err(Error::Tableau(format!("{leaving} is not basic")));
        };
        let pivot = self.rows[r][col].clone();
        if pivot.is_zero() {
            return Err(Error::SingularPivot {
                entering: entering.to_string(),
                leaving: leaving.to_string(),
            });
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                let num = &pivot * &*x - &factor * p;
                let (q, rem) = num.div_rem(&self.det);
                assert!(rem.is_zero(), "inexact division in integer pivot");
                *x = q;
            }
        }
        if pivot.is_negative() {
            for row in &mut self.rows {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            self.det = -pivot;
        } else {
            self.det = pivot;
        }
        self.basis[r] = entering;
        Ok(())
    }

    /// Pivots until exactly the variables of `target` are basic.
    pub fn move_to_basis(&mut self, target: &[VarId]) -> Result<()> {
        if target.len() != self.d {
            return Err(Error::Tableau(format!("basis needs {} variables", self.d)));
        }
        for &v in target {
            if self.is_basic(v) {
                continue;
            }
            let col = self.column(v)?;
            let Some(r) = (0..self.d)
                .find(|&r| !target.contains(&self.basis[r]) && !self.rows[r][col].is_zero())
            else {
                return Err(Error::Tableau("requested basis is singular".into()));
            };
            let leaving = self.basis[r];
            self.pivot(v, leaving)?;
        }
        Ok(())
    }

    /// Value of any variable in the current basic solution.
    pub fn value(&self, v: VarId) -> Result<Rational> {
        self.column(v)?;
        let Some(r) = self.row_of(v) else {
            return Ok(Rational::zero());
        };
        let scaled = Rational::new(self.rows[r][0].clone(), self.det.clone());
        Ok(match v {
            VarId::W(i) => scaled / Rational::from_integer(self.row_scale[i - 1].clone()),
            _ => scaled,
        })
    }

    /// Values of `z_1..z_d` in the basic solution.
    pub fn basic_solution(&self) -> Vec<Rational> {
        (1..=self.d)
            .map(|i| self.value(VarId::Z(i)).expect("z index in range"))
            .collect()
    }

    /// Values of `w_1..w_d` in the basic solution.
    pub fn slack_solution(&self) -> Vec<Rational> {
        (1..=self.d)
            .map(|i| self.value(VarId::W(i)).expect("w index in range"))
            .collect()
    }

    /// Recomputes `A_B x_B = q` from the original integer system.
    pub fn verify_basic_solution(&self) -> bool {
        let xb: Vec<Rational> = (0..self.d)
            .map(|r| Rational::new(self.rows[r][0].clone(), self.det.clone()))
            .collect();
        (0..self.d).all(|i| {
            let lhs: Rational = self
                .basis
                .iter()
                .zip(&xb)
                .map(|(v, x)| {
                    let col = self.column(*v).expect("basis variable exists");
                    Rational::from_integer(self.system[i][col].clone()) * x
                })
                .sum();
            lhs == Rational::from_integer(self.system[i][0].clone())
        })
    }

    /// Every row of `[q | A_B^{-1}]` has a positive first nonzero entry.
    pub fn is_lexico_positive(&self) -> bool {
        self.rows.iter().all(|row| {
            row[..=self.d]
                .iter()
                .find(|x| !x.is_zero())
                .is_some_and(Signed::is_positive)
        })
    }
}
