use thiserror::Error;

use crate::probset::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value {value} at {what}")]
    NonFinite { what: String, value: f64 },

    #[error("{what} = {value} is outside [0, 1]")]
    OutOfRange { what: String, value: f64 },

    #[error("behavior set violates {} constraint(s), max residual {:.3e}", .0.violations.len(), .0.max_residual)]
    Constraint(ValidationReport),

    #[error("octet reconstructs entries outside [0, 1] at indices {indices:?}")]
    InfeasibleOctet { indices: Vec<usize> },

    #[error("state is not normalized: |norm^2 - 1| = {residual:.3e}")]
    Unnormalized { residual: f64 },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no unique equilibrium: {0}")]
    Indeterminate(String),
}
