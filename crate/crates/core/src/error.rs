use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("space must have positive dimension")]
    ZeroDimension,

    #[error("form matrix is not skew-adjoint (defect {defect:.3e})")]
    NotSkewAdjoint { defect: f64 },

    #[error("form is degenerate (smallest |eigenvalue| {smallest:.3e})")]
    DegenerateForm { smallest: f64 },

    #[error("subspace is not isotropic")]
    NotIsotropic,

    #[error("subspace is not maximal positive-definite")]
    NotMaximalPositive,

    #[error("parameter is not a strict contraction (norm {norm:.6})")]
    NotStrictContraction { norm: f64 },

    #[error("operator is not a contraction (norm {norm:.12})")]
    NotAContraction { norm: f64 },

    #[error("operator is not completely non-unitary (unitary part has dimension {unitary_dim})")]
    NotCnu { unitary_dim: usize },

    #[error("transformed subspace is not a graph over the polarization")]
    NotAGraph,

    #[error("singular system: {0}")]
    Singular(&'static str),

    #[error("matrix expected to be positive semi-definite has eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("point {modulus} lies outside the open unit disc")]
    OutsideDisc { modulus: f64 },

    #[error("confluent point unsupported for sampled input")]
    ConfluentUnsupported,

    #[error("grid is missing the point 0-")]
    MissingZeroMinus,

    #[error("inconsistent grids: {0}")]
    InconsistentGrids(String),

    #[error("invalid realization: {0}")]
    InvalidRealization(String),

    #[error("Gram matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("model space not finite-dimensional at this scale (rank {rank} grew to {refined_rank})")]
    NotFiniteDimensional { rank: usize, refined_rank: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
