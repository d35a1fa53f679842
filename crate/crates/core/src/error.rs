use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GhostError {
    #[error("direction is not a unit vector (|n|^2 = {norm_sq})")]
    NonUnitDirection { norm_sq: f64 },

    #[error("direction has zero length or non-finite components")]
    DegenerateDirection,

    #[error("two-spin state is not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("matrix is not a valid spin observable: {0}")]
    InvalidObservable(&'static str),

    #[error("signed distribution must have total mass 1, got {mass}")]
    InvalidMass { mass: f64 },

    #[error("quadrature orders ({theta}, {phi}) below minimum (2, 4)")]
    QuadratureOrder { theta: usize, phi: usize },

    #[error("{requested} samples requested, at least {minimum} required")]
    TooFewSamples { requested: u64, minimum: u64 },

    #[error("worker count must be at least 1")]
    NoWorkers,

    #[error("outcome sequences must be non-empty and of equal length ({lambda_b} vs {lambda_a})")]
    SequenceLength { lambda_b: usize, lambda_a: usize },

    #[error("conditioning outcome has zero probability; conditional undefined")]
    ZeroMarginal,

    #[error("invalid conditional matrix: {0}")]
    InvalidConditional(&'static str),

    #[error("angle must be finite")]
    NonFiniteAngle,

    #[error("invalid Bell configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("mixture weights must be nonnegative and sum to 1")]
    InvalidMixture,
}

pub type Result<T> = std::result::Result<T, GhostError>;
