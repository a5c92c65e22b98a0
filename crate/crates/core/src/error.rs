use thiserror::Error;

/// Errors raised by the numeric modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grids differ: {0}")]
    GridMismatch(String),
    #[error("region half-width {halfwidth} exceeds the sampled grid")]
    RegionOutOfGrid { halfwidth: f64 },
    #[error("signal has zero energy")]
    ZeroSignal,
    #[error("grid axis is not uniform: {0}")]
    NonUniformGrid(String),
    #[error("band limit {w} exceeds the frequency window (max |u| = {max})")]
    WindowTooSmall { w: f64, max: f64 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("symmetric eigensolver did not converge")]
    ConvergenceFailure,
    #[error("eigenvalue {lambda:e} of index {k} is below the floor")]
    EigenvalueTooSmall { k: usize, lambda: f64 },
    #[error("coefficient modulus {0} is not 1")]
    NonUnitCoefficient(f64),
    #[error("xi = {xi} outside the admissible range [{lo}, {hi})")]
    XiOutOfRange { xi: f64, lo: f64, hi: f64 },
    #[error("bad basis index {0}")]
    BadIndex(usize),
    #[error("no basis element has eigenvalue below xi^2 = {0}")]
    NoAdmissibleIndex(f64),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("io: {0}")]
    Io(String),
    #[error("malformed QGRID data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
