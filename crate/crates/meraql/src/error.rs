//! Crate-wide error type.

/// Errors produced by lattice construction, Pauli algebra, and the numerical
/// pipelines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Lattice dimensions violate a constructor precondition.
    #[error("invalid lattice dimensions {lx}x{ly}: {reason}")]
    InvalidLattice {
        lx: usize,
        ly: usize,
        reason: &'static str,
    },

    /// Two operators live on different qubit counts.
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),

    /// Stabilizer generators must commute pairwise.
    #[error("generators anticommute (rows {0} and {1})")]
    AnticommutingGenerators(usize, usize),

    /// The generated group contains -I (inconsistent sign assignment).
    #[error("generated group contains -I")]
    MinusIdentity,

    /// A stabilizer generator must be Hermitian (phase i^0 or i^2 with the
    /// right X/Z overlap parity).
    #[error("non-Hermitian Pauli operator: {0}")]
    NonHermitian(String),

    /// Text-form Pauli parse failure.
    #[error("parse error: {0}")]
    Parse(String),

    /// A Majorana monomial with odd fermion parity cannot be bosonized.
    #[error("odd Majorana monomial has no local spin image")]
    OddMonomial,

    /// A spectrum was gapless within the requested tolerance.
    #[error("spectrum is gapless (min |E| = {min_abs_energy} <= tol {tol})")]
    Gapless { min_abs_energy: f64, tol: f64 },

    /// Generic precondition violation.
    #[error("{0}")]
    Invalid(String),

    /// Filesystem / output error.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Config deserialization error.
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Shorthand for a generic precondition violation.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
