use thiserror::Error;

/// Errors produced by the evaluator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: series did not converge after {iterations} terms")]
    NonConvergence {
        function: &'static str,
        iterations: usize,
    },

    #[error("quadrature failed: estimate {estimate:e}, error bound {error:e} above tolerance {tolerance:e}")]
    QuadratureFailure {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("mmWave beamwidth {theta} rad outside (0, pi/2)")]
    BeamDomain { theta: f64 },

    #[error("degenerate realization: {0}")]
    DegenerateRealization(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error output and CSV rows.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonConvergence { .. } => "non_convergence",
            Error::QuadratureFailure { .. } => "quadrature_failure",
            Error::DegenerateGeometry(_) => "degenerate_geometry",
            Error::BeamDomain { .. } => "beam_domain",
            Error::DegenerateRealization(_) => "degenerate_realization",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse { .. } => "parse_error",
            Error::Validation(_) => "validation_error",
            Error::Io(_) => "io_error",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
