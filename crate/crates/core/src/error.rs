use thiserror::Error;

/// Errors produced by model construction, prior handling and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("degenerate time interval at t = {0}")]
    DegenerateInterval(f64),

    #[error("computed variance {0} is negative beyond round-off")]
    NegativeVariance(f64),

    #[error("non-monotone data: {0}")]
    NonMonotone(String),

    #[error("invalid coefficient curve: {0}")]
    InvalidCurve(String),

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The posterior weight underflowed everywhere: the state (s, y) is
    /// effectively impossible under the prior.
    #[error("posterior mass underflow at (s = {s}, y = {y})")]
    ImpossibleState { s: f64, y: f64 },

    #[error("likelihood-ratio order indeterminate: {0}")]
    IndeterminateOrder(String),

    #[error("fixed-point iteration did not converge after {iterations} sweeps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
