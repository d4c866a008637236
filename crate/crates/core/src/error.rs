use std::path::PathBuf;

use crate::fitting::FitResult;

/// Errors produced by the modeling, fitting and capacity routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{quantity} = {value} is outside its domain {domain}")]
    Domain {
        quantity: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "quadrature did not converge: estimated error {achieved:.3e}, requested {requested:.3e}"
    )]
    Quadrature { achieved: f64, requested: f64 },

    #[error("log-grid integral did not converge after {doublings} grid doublings (last estimates {partial:?})")]
    GridNonConvergence { doublings: usize, partial: Vec<f64> },

    #[error("{family} fit did not converge after {restarts} restarts (best mse {:.3e})", best.mse)]
    FitNonConvergence {
        family: &'static str,
        restarts: usize,
        best: Box<FitResult>,
    },

    #[error("regression is singular: {0}")]
    Singular(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse { .. } | Error::Io(_) | Error::InvalidParameter(_) => 2,
            _ => 3,
        }
    }

    pub(crate) fn domain(quantity: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            quantity,
            value,
            domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
