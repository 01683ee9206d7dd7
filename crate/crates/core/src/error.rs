/// Crate-wide error type.
///
/// Two failure classes exist: contract violations on inputs, and numerical
/// procedures that ran out of headroom. Accuracy failures always carry the
/// best estimate obtained so callers can degrade gracefully instead of
/// losing the computation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A numerical procedure failed to reach its target accuracy.
    ///
    /// `best` is the most accurate value obtained; `est_error` is an estimate
    /// of its absolute error. Double precision caps reliably resolvable
    /// `1 − λ₀` (hence `−ln λ₀`) near 1e−13; convergence failures in that
    /// regime mention the floor in `context`.
    #[error("accuracy failure in {context}: best estimate {best:e} (est. error {est_error:e})")]
    AccuracyFailure {
        context: String,
        best: f64,
        est_error: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
