use thiserror::Error;

/// Errors surfaced by the numerical routines and the scenario harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("wedge degree {0} exceeds base dimension {1}")]
    DegreeOverflow(usize, usize),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid Lie algebra data: {0}")]
    InvalidAlgebra(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("Lie algebra is not semisimple: dim H^1 = {0}")]
    NotSemisimple(usize),

    #[error("form is not exact: coexact norm {coexact:.3e}, harmonic norm {harmonic:.3e}, total norm {total:.3e}")]
    NotExact { coexact: f64, harmonic: f64, total: f64 },

    #[error("invariant polynomial rejected: {0}")]
    NotInvariant(String),

    #[error("wrong polynomial type: {0}")]
    WrongPolynomial(String),

    #[error("curvature is not closed: |dF| = {0:.3e}")]
    NotClosed(f64),

    #[error("band {band} too small for connection of band {needed}")]
    BandTooSmall { band: usize, needed: usize },

    #[error("reality condition violated at frequency {0:?}")]
    RealityViolated(Vec<i64>),

    #[error("solver failure at order {order}: {reason}")]
    SolverFailure { order: usize, reason: String },

    #[error("pages did not stabilize within K = {0}")]
    NotStabilized(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
