use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input outside the domain of a formula (zero mixing pool, log of zero, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A compartment left `[0, 1]` by more than the clamping tolerance.
    #[error("integration error at t = {t}: compartment {compartment} = {value:e} (step too large?)")]
    Integration {
        t: f64,
        compartment: &'static str,
        value: f64,
    },

    /// The mixed-equilibrium root finder could not bracket or converge.
    #[error("solver error: {0}")]
    Solver(String),

    #[error("simulation failed on day {day}: {source}")]
    Simulation {
        day: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Domain(_) | Error::Integration { .. } | Error::Solver(_) => 2,
            Error::Simulation { source, .. } => source.exit_code(),
            Error::Io { .. } | Error::Csv { .. } => 3,
        }
    }
}
