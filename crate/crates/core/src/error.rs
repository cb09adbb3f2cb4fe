use thiserror::Error;

/// Errors raised by the bound formulas, the cycle simulator and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("requested power {power} outside (0, {p_max}]")]
    PowerOutOfRange { power: f64, p_max: f64 },

    #[error("heat intake is not positive (Q_h^(r) - M_h/t_h = {0})")]
    InvalidRegime(f64),

    #[error("degenerate solution: {0}")]
    Degenerate(String),

    #[error("time {t} outside [0, {period}]")]
    TimeOutOfRange { t: f64, period: f64 },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("quadrature did not converge (estimated error {0:e})")]
    Quadrature(f64),

    #[error("near-singular analytic expression: {0}")]
    NearSingular(String),

    #[error("steady cycle not reached after {cycles} cycles (last residual {residual:e})")]
    NoConvergence { cycles: usize, residual: f64 },

    #[error("infeasible target: {0}")]
    Infeasible(String),

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("csv output failed: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
