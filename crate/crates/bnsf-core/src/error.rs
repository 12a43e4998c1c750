//! Crate-wide error type.

/// Errors produced by profile construction, time stepping, and configuration
/// validation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A mathematical function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter violated a documented invariant (e.g. gamma <= 1).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// The requested shock amplitude has no admissible end state.
    #[error("infeasible shock amplitude: {0}")]
    InfeasibleAmplitude(String),

    /// Constructed end states failed the admissibility (Lax ordering) check.
    #[error("inadmissible shock: {0}")]
    Admissibility(String),

    /// The traveling-wave shooter failed to connect the two end states.
    #[error("profile connection failure: {0}")]
    NoConnection(String),

    /// The traveling-wave trajectory lost strict monotonicity.
    #[error("non-monotone shock profile: {0}")]
    Monotonicity(String),

    /// A grid state violated positivity of v or theta during evolution.
    #[error("state invalid at t={t}, cell {cell}: {msg}")]
    StateInvalid { t: f64, cell: usize, msg: String },

    /// A run configuration was inconsistent or out of range.
    #[error("configuration error: {0}")]
    Config(String),

    /// A requested target (e.g. an initial entropy level) cannot be met.
    #[error("infeasible request: {0}")]
    Infeasible(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
