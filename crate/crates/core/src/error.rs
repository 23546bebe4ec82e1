use thiserror::Error;

/// All failure modes of the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("missing required config key `{0}`")]
    MissingKey(String),
    #[error("invalid value for `{name}`: {reason}")]
    InvalidValue { name: String, reason: String },
    #[error("config parse error at line {line}: {reason}")]
    ParseError { line: usize, reason: String },
    #[error("|m| = {m} exceeds J = {j}")]
    OutOfRange { j: f64, m: f64 },
    #[error("dense brute-force oracle limited to J <= 25, got {0}")]
    TooLarge(f64),
    #[error("population went negative at t = {t} s (after {halvings} step halvings)")]
    NegativePopulation { t: f64, halvings: u32 },
    #[error("nominally real moment `{name}` has imaginary residue {residue:e}")]
    NonRealMoment { name: &'static str, residue: f64 },
    #[error("mean spin length {norm:e} too small to define a transverse plane")]
    ZeroMeanSpin { norm: f64 },
    #[error("all samples fall outside the epsilon bin range")]
    EmptyRange,
    #[error("degenerate polar angle theta = {0} (expected 0 <= theta <= pi)")]
    DegenerateAngle(f64),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidValue {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MissingKey(_)
            | Error::InvalidValue { .. }
            | Error::ParseError { .. } => 2,
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
