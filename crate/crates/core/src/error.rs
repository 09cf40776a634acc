use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("null state")]
    NullState,

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("non-finite amplitude")]
    NonFinite,

    #[error("orthogonal projection (probability {0:e})")]
    OrthogonalProjection(f64),

    #[error("unknown basis label `{0}`")]
    UnknownBasis(String),

    #[error("unphysical coherence |g| = {0}")]
    UnphysicalCoherence(f64),

    #[error("not a valid density operator: {0}")]
    InvalidDensity(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("insufficient quadrature: {0}")]
    InsufficientQuadrature(String),

    #[error(
        "undersampled phase: oscillation period spans {steps_per_period:.2} grid steps (need >= 4)"
    )]
    UndersampledPhase { steps_per_period: f64 },

    #[error("beyond Fraunhofer approximation: max(a, b)·d/2α = {ratio:.4} exceeds {limit}")]
    BeyondFraunhofer { ratio: f64, limit: f64 },

    #[error("zero-intensity point at x = {0} m")]
    ZeroIntensity(f64),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
