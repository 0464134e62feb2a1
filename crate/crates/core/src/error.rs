use thiserror::Error;

use crate::polygon::Diagonal;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameters outside the model: n = {n}, m = {m} (both must be at least 1)")]
    InvalidParameters { n: u32, m: u32 },

    #[error("({a},{b}) is not a diagonal of the {vertices}-gon")]
    NotADiagonal { a: u32, b: u32, vertices: u32 },

    #[error("{diagonal} is not a {n}-diagonal")]
    NotAnNDiagonal { diagonal: Diagonal, n: u32 },

    #[error("rank {rank} out of range (only {count} diagonals)")]
    RankOutOfRange { rank: usize, count: usize },

    #[error("diagonal sets belong to different polygons")]
    SpecMismatch,

    #[error("not a valid cut set: {0} crosses {1}")]
    CrossingCutSet(Diagonal, Diagonal),

    #[error("{member} crosses the cut diagonal {cut}")]
    CrossesCut { member: Diagonal, cut: Diagonal },

    #[error("{0} does not lie inside the cell")]
    NotInCell(Diagonal),

    #[error("{0} is an edge of the cell")]
    CellEdge(Diagonal),

    #[error("the set is not closed, so it is not the first half of an n-cotorsion pair")]
    NotClosed,

    #[error("cut diagonals outside the frame: {}", list(.0))]
    CutNotInFrame(Vec<Diagonal>),

    #[error("exhaustive scan needs 2^{diagonals} subsets, above the budget of {budget}")]
    BudgetExceeded { diagonals: usize, budget: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

fn list(ds: &[Diagonal]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
}
