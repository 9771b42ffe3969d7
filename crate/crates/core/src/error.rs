use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Density reached zero or went negative.
    #[error("vacuum state: density {rho} is not positive")]
    Vacuum { rho: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate interval [{lo}, {hi}]")]
    DegenerateInterval { lo: f64, hi: f64 },

    #[error("division by a function that vanishes (min |g| = {min_abs:e})")]
    DivisionByZero { min_abs: f64 },

    #[error("incompatible periodic functions: {0}")]
    Incompatible(String),

    #[error("profile is not strictly positive (min value {min})")]
    NonPositiveProfile { min: f64 },

    #[error("operator (1 - c d_xx) is singular at k = {k} (c = {c})")]
    SingularOperator { c: f64, k: f64 },

    #[error("solution blew up at t = {t}: {detail}")]
    Blowup { t: f64, detail: String },

    #[error("unknown scenario preset `{name}` (available: {available})")]
    UnknownPreset { name: String, available: String },

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("{0}")]
    Mismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
