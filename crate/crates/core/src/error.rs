use thiserror::Error;

use crate::enumeration::DegeneracyReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("vectors of different length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(String),

    #[error("point is not in polytope {polytope}: {reason}")]
    NotInPolytope { polytope: char, reason: String },

    #[error("zero point has no strategy rescaling (artificial equilibrium)")]
    ArtificialEquilibrium,

    #[error("best-response polytopes are unbounded; positivize the game first")]
    NotPolytopeForm,

    #[error("label {label} out of range 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },

    #[error("strategy pair is not a Nash equilibrium")]
    NotAnEquilibrium,

    #[error("point is not completely labeled: missing labels {missing:?}")]
    NotCompletelyLabeled { missing: Vec<usize> },

    #[error("game is degenerate ({} witness vertices)", .0.witnesses.len())]
    Degenerate(Box<DegeneracyReport>),

    #[error("tableau usage error: {0}")]
    Tableau(String),

    #[error("zero pivot element for {entering} replacing {leaving}")]
    SingularPivot { entering: String, leaving: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub fn is_degeneracy(&self) -> bool {
        matches!(self, Error::Degenerate(_))
    }
}
