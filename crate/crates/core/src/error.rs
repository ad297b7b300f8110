//! Error type shared by every module in this crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CsError>;

/// Errors produced by signal generation, noise models, reconstruction,
/// closed-form predictions, and the Monte-Carlo harness.
#[derive(Debug, Clone, PartialEq)]
pub enum CsError {
    /// A precondition on a scalar or dimension parameter was violated.
    InvalidParameter(String),
    /// Two objects that must agree in size do not.
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    /// A support set contains an out-of-range or duplicate index.
    InvalidSupport(String),
    /// The restricted sensing matrix is numerically rank deficient;
    /// the reconstruction is refused rather than silently regularized.
    SingularMatrix {
        smallest: f64,
        largest: f64,
        tolerance: f64,
    },
    /// The noise channel is deterministic (a quantizer) and carries no
    /// covariance matrix.
    DeterministicChannel,
    /// The moment-existence condition `m > k + 3` behind the closed-form
    /// error expression and the pseudo-inverse mean was violated.
    MomentCondition { m: usize, k: usize },
    /// Brute-force subset enumeration would exceed the configured guard.
    CombinatorialGuard { count: u64, guard: u64 },
    /// A computation that cannot fail for valid inputs failed anyway.
    Internal(String),
}

impl fmt::Display for CsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CsError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            CsError::DimensionMismatch {
                what,
                expected,
                actual,
            } => write!(
                f,
                "dimension mismatch: {what} expected {expected}, got {actual}"
            ),
            CsError::InvalidSupport(msg) => write!(f, "invalid support set: {msg}"),
            CsError::SingularMatrix {
                smallest,
                largest,
                tolerance,
            } => write!(
                f,
                "restricted matrix is rank deficient: smallest singular value {smallest:e} \
                 is below {tolerance:e} x largest ({largest:e})"
            ),
            CsError::DeterministicChannel => {
                write!(
                    f,
                    "deterministic channel: a quantizer has no covariance matrix"
                )
            }
            CsError::MomentCondition { m, k } => write!(
                f,
                "the condition m > k + 3 is violated (m = {m}, k = {k}); the exact \
                 expected-error formula and the pseudo-inverse mean require it"
            ),
            CsError::CombinatorialGuard { count, guard } => write!(
                f,
                "refusing to enumerate {count} subsets (guard is {guard})"
            ),
            CsError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for CsError {}
