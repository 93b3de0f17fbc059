//! Crate-wide error type.
//!
//! Domain violations are typed rather than signalled through NaN so that
//! callers (in particular the estimation sweeps) can tell "parameters outside
//! the admissible region" apart from genuine numerical failure.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside a function's domain (non-positive Beta argument,
    /// level outside (0,1), invalid distribution parameter, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The defining tail functional diverges for these parameters
    /// (admissibility condition violated).
    #[error("divergent risk functional: {0}")]
    Divergence(String),

    /// Second-order metadata required by an expansion is missing or
    /// degenerate.
    #[error("second-order metadata unavailable: {0}")]
    MissingSecondOrder(String),

    /// Adaptive quadrature could not reach the requested accuracy.
    /// Carries the partial estimate and its error bound.
    #[error("quadrature accuracy not reached: estimate {estimate}, error bound {error}")]
    QuadratureAccuracy { estimate: f64, error: f64 },

    /// Root bracketing failed (no sign change found within the expansion
    /// budget).
    #[error("bracketing failed: {0}")]
    Bracketing(String),

    /// Root refinement stalled before meeting the residual tolerance.
    #[error("root refinement did not converge: {0}")]
    Convergence(String),

    /// Configuration file or CLI input could not be interpreted.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for domain/input errors, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Divergence(_)
            | Error::MissingSecondOrder(_)
            | Error::Config(_)
            | Error::Io(_) => 2,
            Error::QuadratureAccuracy { .. } | Error::Bracketing(_) | Error::Convergence(_) => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_split_domain_from_numeric() {
        assert_eq!(Error::Domain("x".into()).exit_code(), 2);
        assert_eq!(Error::Divergence("x".into()).exit_code(), 2);
        assert_eq!(Error::Config("x".into()).exit_code(), 2);
        assert_eq!(Error::QuadratureAccuracy { estimate: 0.0, error: 1.0 }.exit_code(), 3);
        assert_eq!(Error::Bracketing("x".into()).exit_code(), 3);
        assert_eq!(Error::Convergence("x".into()).exit_code(), 3);
    }
}
