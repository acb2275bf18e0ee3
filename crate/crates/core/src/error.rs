use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// su(2) representations are finite; the matrix dimension must be `M + 1`.
    #[error("dimension mismatch: su(2) with M = {label} needs dim {expected}, got {got}")]
    DimensionMismatch {
        label: u32,
        expected: usize,
        got: usize,
    },

    /// The truncated Fock window could not be grown far enough.
    #[error("truncation insufficient: tail bound {tail:.3e} at dim {dim} (target {target:.1e})")]
    TruncationInsufficient { dim: usize, tail: f64, target: f64 },

    /// The alternating coefficient sum cancelled too strongly to trust in double precision.
    #[error("precision loss: cancellation indicator {indicator:.3e} exceeds {limit:.1e}")]
    PrecisionLoss { indicator: f64, limit: f64 },

    /// `tan 2r` diverges: the su(2) Hamiltonian has no finite coupling.
    #[error("singular coupling: |cos 2r| = {cos_2r:.3e}")]
    SingularCoupling { cos_2r: f64 },

    /// Mandel Q is undefined when the mean photon number vanishes.
    #[error("Mandel Q undefined: mean photon number is zero")]
    UndefinedQ,
}

pub type Result<T> = std::result::Result<T, Error>;
