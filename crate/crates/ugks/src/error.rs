//! Error types shared across the solver.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration value or inconsistent setup parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// A cell or interface state became unusable (vacuum, negative
    /// temperature, singular moment system).
    #[error("degenerate state: {0}")]
    Degenerate(String),

    /// The velocity grid cannot represent the requested distribution.
    #[error("resolution error: {context} (mass deficit {deficit:.3e} exceeds tolerance {tolerance:.1e})")]
    Resolution {
        /// What was being sampled when the deficit was detected.
        context: String,
        /// Fraction of mass lost to truncation on the grid.
        deficit: f64,
        /// Largest acceptable deficit.
        tolerance: f64,
    },

    /// NaN or overflow appeared in a transform or update.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A steady-state iteration exhausted its step budget.
    #[error("no convergence after {iterations} iterations (last residual {last_residual:.3e})")]
    NonConvergence {
        /// Steps taken before giving up.
        iterations: usize,
        /// Residual at the final step.
        last_residual: f64,
        /// Residual trace for diagnostics, subsampled.
        history: Vec<f64>,
    },

    /// I/O failure with the offending path attached.
    #[error("i/o error on {path}: {source}")]
    Io {
        /// Path involved in the failed operation.
        path: String,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },

    /// Config document could not be parsed.
    #[error("config parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attach a path to an `std::io::Error`.
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
