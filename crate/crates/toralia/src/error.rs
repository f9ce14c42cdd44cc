use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate lattice: generators span rank {rank} < 2")]
    DegenerateLattice { rank: usize },
    #[error("unsupported embedding: {0}")]
    Unsupported(String),
    #[error("invalid character index {j} for order {order}")]
    InvalidCharacter { j: i64, order: u32 },
    #[error("automorphisms live on different lattices")]
    LatticeMismatch,
    #[error("singular matrix")]
    Singular,
    #[error("function is not in the ring: held-out residual {residual:e}")]
    NotInRing { residual: f64 },
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
