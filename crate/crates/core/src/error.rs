use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cannot combine a state vector with a density matrix")]
    MixedKinds,

    #[error("invalid subsystem selection: {0}")]
    InvalidKeep(String),

    #[error("not a Heisenberg-channel output: residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotHeisenbergOutput { residual: f64, tolerance: f64 },

    #[error("channel is not isotropic: entry ({m},{n}) = {value} differs from {expected}")]
    Anisotropic {
        m: usize,
        n: usize,
        value: f64,
        expected: f64,
    },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("point leaves the first octant: {0}")]
    OutsideOctant(String),

    #[error("oracle mismatch in {what}: deviation {deviation:.3e}")]
    OracleMismatch { what: String, deviation: f64 },

    #[error("dimension {dim} exceeds the simulation cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
