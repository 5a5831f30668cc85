use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function} has a pole at {z}")]
    Pole { function: &'static str, z: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("could not bracket a root of {0}")]
    Bracket(&'static str),

    #[error("non-monotone bracket on ({lo}, {hi}) in {what}")]
    NonMonotone { what: &'static str, lo: f64, hi: f64 },

    #[error("integrator step failure at x = {x}")]
    StepFailure { x: f64 },

    #[error("energy scan exhausted: found {found} of {wanted} eigenvalues below E = {e_top}")]
    ScanExhausted { found: usize, wanted: usize, e_top: f64 },

    #[error("sample grids do not match")]
    GridMismatch,
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
