use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("expected a {expected} grid, got {found}")]
    WrongConvention {
        expected: &'static str,
        found: &'static str,
    },

    #[error("pattern shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("negative power value: {0}")]
    NegativePower(f64),

    #[error("conflicting duplicate samples for direction theta={theta_deg}, phi={phi_deg}: {first} vs {second}")]
    ConflictingSamples {
        theta_deg: f64,
        phi_deg: f64,
        first: f64,
        second: f64,
    },

    #[error("invalid mask: {0}")]
    InvalidMask(String),

    #[error("point masks have no area; evaluate them with cvrp_point")]
    PointMask,

    #[error("degenerate mask: solid angle {0} sr is below 1e-12 sr")]
    DegenerateMask(f64),

    #[error("invalid band: theta1={theta1} must be below theta2={theta2} inside [0, 180]")]
    InvalidBand { theta1: f64, theta2: f64 },

    #[error("invalid field-of-view list: {0}")]
    InvalidFovList(String),

    #[error("invalid array specification: {0}")]
    InvalidArray(String),

    #[error("every array element has failed; the pattern is identically zero")]
    AllElementsFailed,

    #[error("reference TRP must be positive, got {0} mW")]
    NonPositiveReference(f64),

    #[error("sweeps cannot be compared: {0}")]
    SweepMismatch(String),

    #[error("threshold must be positive, got {0} dB")]
    InvalidThreshold(f64),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
