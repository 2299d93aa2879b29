//! Exact Nash equilibria of bimatrix games.
//!
//! * [`lh`] follows Lemke-Howson paths by integer pivoting on the
//!   symmetrized best-response polytope, computes equilibrium indices and
//!   runs Lemke's method on general LCPs.
//! * [`enumeration`] finds every equilibrium, by support enumeration or by
//!   enumerating the vertices of the best-response polytopes, and describes
//!   the full set through maximal Nash subsets and their components.
//! * [`cli`] reads game files and produces the reports of the `bimatrix`
//!   binary.
//!
//! All arithmetic is exact; see [`exact`].

pub mod cli;
pub mod enumeration;
pub mod error;
pub mod exact;
pub mod game;
pub mod lh;
pub mod tableau;

pub use error::{Error, Result};
pub use exact::{Rational, RationalMatrix, Sign};
pub use game::{BimatrixGame, Equilibrium, Label, LabeledPoint, MixedStrategy, Player, Polytope};
