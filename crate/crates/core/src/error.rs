use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate cable geometry: tracker pulley and attachment point coincide")]
    DegenerateCable,

    #[error("step rate exceeded on belt {belt}: {steps} steps in {dt} s (limit {limit} steps)")]
    StepRateExceeded {
        belt: char,
        steps: i64,
        dt: f64,
        limit: i64,
    },

    #[error("trajectory queried at t = {t} s outside its domain")]
    TrajectoryOutOfRange { t: f64 },

    #[error("cable fully paid out: tracker-to-target length {l1} m reaches total cable length {total} m")]
    CablePaidOut { l1: f64, total: f64 },

    #[error("no records to summarize")]
    EmptyRun,

    #[error("no feasible gains: {0}")]
    NoFeasibleGains(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
