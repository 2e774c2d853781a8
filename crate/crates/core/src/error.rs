use thiserror::Error;

/// Errors reported by geometry construction, analysis and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("q = {0} is not a prime; only prime fields are supported")]
    NonPrimeOrder(u32),

    #[error("projective dimension r = {0} is too small; need r >= 2")]
    DimensionTooSmall(usize),

    #[error("PG({r},{q}) has {points} points, exceeding the supported maximum of {max}")]
    SpaceTooLarge {
        r: usize,
        q: u32,
        points: usize,
        max: usize,
    },

    #[error("the zero vector does not represent a projective point")]
    ZeroVector,

    #[error("coordinate vector has length {got}, expected {want}")]
    BadCoordinateLength { got: usize, want: usize },

    #[error("coordinate value {0} is not a residue mod {1}")]
    BadCoordinateValue(u32, u32),

    #[error("matrix is singular; projectivities must be invertible")]
    SingularMatrix,

    #[error("point set is not a cap: points {0}, {1}, {2} are collinear")]
    NotACap(u16, u16, u16),

    #[error("cap does not span the space (rank {rank} < {dim}); stabilizer enumeration needs a spanning cap")]
    NotSpanning { rank: usize, dim: usize },

    #[error("cap has {0} points; stabilizer enumeration needs at least r + 2 = {1}")]
    TooFewPoints(usize, usize),

    #[error("projectivity does not stabilize the given cap")]
    NotAStabilizer,

    #[error("columns {0} and {1} represent the same projective point")]
    DuplicateColumn(usize, usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
