use thiserror::Error;

/// Errors raised by state validation, update rules and the projection solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |H - H^†| = {0:.3e})")]
    NonHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("state is not normalized (trace {0})")]
    NotNormalized(f64),

    #[error("matrix is not a projector (residual {0:.3e})")]
    NotProjector(f64),

    #[error("projectors do not form an orthogonal resolution of the identity (residual {0:.3e})")]
    NotResolution(f64),

    #[error("groups do not partition 1..={0}")]
    NotPartition(usize),

    #[error("basis is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is singular on the requested support (min eigenvalue {0:.3e})")]
    SingularInput(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("conditioning event has probability {0:.3e}")]
    ZeroProbability(f64),

    #[error("weights do not match the resolution: {0}")]
    WeightMismatch(String),

    #[error("evidence has zero marginal probability")]
    ZeroEvidence,

    #[error("support condition violated: {0}")]
    SupportViolation(String),

    #[error("supports of the two states do not commute")]
    NonCommutingSupports,

    #[error("constraint set is infeasible: {0}")]
    Infeasible(String),

    #[error("divergence is infinite: {0}")]
    InfiniteDivergence(String),

    #[error("unknown theorem id {0:?} (expected T1..T11)")]
    UnknownTheorem(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
