use thiserror::Error;

/// Errors raised by model construction, field evaluation, and numerics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("level r = {r} is not above the critical level b_min = {b_min}")]
    BelowCriticalLevel { r: f64, b_min: f64 },

    #[error("field `{field}` is incompatible with model `{model}`: {reason}")]
    Incompatible {
        field: String,
        model: String,
        reason: String,
    },

    #[error(
        "quadrature did not converge on [{a}, {b}]: estimate {estimate:e} with error {error:e}"
    )]
    QuadratureFailure {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
    },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    Stiffness { t: f64, h: f64 },

    #[error("numeric range exceeded: {0}")]
    NumericRange(String),

    #[error("log of non-positive quantity: {0}")]
    UndefinedLog(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
