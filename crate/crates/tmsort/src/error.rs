use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is not unimodular: ad - bc = {det}")]
    NotUnimodular { det: f64 },
    #[error("degenerate angle: sin(gamma) = 0 for gamma = {gamma}")]
    DegenerateAngle { gamma: f64 },
    #[error("incompatible grids: {0}")]
    IncompatibleGrid(String),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("unsupported degenerate transform: a = {a}, b = {b}")]
    UnsupportedDegenerate { a: f64, b: f64 },
    #[error("window overflow: {fraction:.3e} of the norm left the grid")]
    WindowOverflow { fraction: f64 },
    #[error("singular configuration: {0}")]
    SingularConfiguration(String),
    #[error("outside the supported regime: {0}")]
    OutOfRegime(String),
    #[error("infeasible design: {0}")]
    InfeasibleDesign(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {value}")))
    }
}
