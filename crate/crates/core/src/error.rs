use thiserror::Error;

/// Failures raised while building states or evaluating phase quantities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid truncation: dimension {dim} must exceed Fock parameter {n}")]
    InvalidTruncation { dim: usize, n: usize },

    #[error("truncation overflow: {lost_mass:e} of the norm would leave the basis (tolerance {tolerance:e})")]
    TruncationOverflow { lost_mass: f64, tolerance: f64 },

    #[error("truncation failed: tail mass {tail_mass:e} still above {tolerance:e} at dimension {dim}")]
    TruncationFailure {
        dim: usize,
        tail_mass: f64,
        tolerance: f64,
    },

    #[error("operation annihilated the state (norm {norm_sq:e})")]
    ZeroState { norm_sq: f64 },

    #[error("invalid state spec: {0}")]
    InvalidSpec(String),

    #[error("missing parameter `{0}` for limiting state")]
    MissingParameter(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("|beta| = {beta_mag} outside the certified range of a {dim}-dimensional state")]
    BetaOutOfRange { beta_mag: f64, dim: usize },

    #[error("radial quadrature did not converge: tail estimate {tail:e} exceeds {bound:e}")]
    QuadratureNotConverged { tail: f64, bound: f64 },

    #[error("matrix exponential did not converge: error bound {bound:e}")]
    ExponentialNotConverged { bound: f64 },

    #[error("dimension mismatch: operator {op_dim} smaller than state {state_dim}")]
    DimensionMismatch { op_dim: usize, state_dim: usize },

    #[error("phase {phi} too close to a zero of d<Jz>/dphi")]
    SlopeSingular { phi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
