use std::fmt;

/// Failure of a subcommand: process exit code, the check that failed, detail.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub check: String,
    pub detail: String,
}

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EIGEN: i32 = 3;
pub const EXIT_RESIDUAL: i32 = 4;
pub const EXIT_NOT_CONVERGED: i32 = 5;

impl CliError {
    pub fn new(code: i32, check: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            code,
            check: check.into(),
            detail: detail.into(),
        }
    }

    pub fn input(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, check, detail)
    }

    /// Map a library error raised while handling user input.
    pub fn from_core(e: qpswf::Error) -> Self {
        use qpswf::Error as E;
        let check = match &e {
            E::ConvergenceFailure => return Self::new(EXIT_EIGEN, "eigensolver", e.to_string()),
            E::EigenvalueTooSmall { .. } => return Self::new(EXIT_EIGEN, "eigenvalue_floor", e.to_string()),
            E::GridMismatch(_) => "GridMismatch",
            E::RegionOutOfGrid { .. } => "RegionOutOfGrid",
            E::ZeroSignal => "ZeroSignal",
            E::NonUniformGrid(_) => "NonUniformGrid",
            E::WindowTooSmall { .. } => "WindowTooSmall",
            E::BadParameters(_) => "BadParameters",
            E::NonUnitCoefficient(_) => "NonUnitCoefficient",
            E::XiOutOfRange { .. } => "XiOutOfRange",
            E::BadIndex(_) => "BadIndex",
            E::NoAdmissibleIndex(_) => "NoAdmissibleIndex",
            E::LengthMismatch { .. } => "LengthMismatch",
            E::Io(_) => "io",
            E::Format(_) => "qgrid_format",
        };
        Self::input(check, e.to_string())
    }

    /// Single-line form `ERROR <code> <check>: <detail>`.
    pub fn line(&self) -> String {
        let detail: String = self
            .detail
            .chars()
            .map(|c| if c == '\n' || c == '\r' { ' ' } else { c })
            .collect();
        format!("ERROR {} {}: {}", self.code, self.check, detail)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

impl std::error::Error for CliError {}

impl From<qpswf::Error> for CliError {
    fn from(e: qpswf::Error) -> Self {
        Self::from_core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn io_err(path: &std::path::Path, e: impl fmt::Display) -> CliError {
    CliError::input("io", format!("{}: {e}", path.display()))
}
