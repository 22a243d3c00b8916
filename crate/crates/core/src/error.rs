use thiserror::Error;

/// Errors raised by the index calculus, the solver and the certifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Elliptic block `block` has an integral rotation number at iterate `iterate`.
    #[error("degenerate iterate: elliptic block {block} is integral at iterate {iterate}")]
    DegenerateIterate { block: usize, iterate: u64 },

    #[error("iterate {iterate} exceeds the certified nondegeneracy bound {bound}")]
    IterateOutOfCertifiedRange { iterate: u64, bound: u64 },

    #[error("no certificate within search bound {bound}")]
    SearchExhausted { bound: u64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("orbit {0} has zero mean index")]
    ZeroMeanIndex(String),

    #[error("certificate mismatch: {0}")]
    CertificateMismatch(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic range exceeded: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
