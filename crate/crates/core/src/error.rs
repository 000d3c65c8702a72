use thiserror::Error;

/// Errors raised by the geometry, measure and flow routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A profile or density was evaluated outside its domain of definition.
    #[error("{what} is undefined at {at} (domain: {domain})")]
    Domain {
        what: &'static str,
        at: f64,
        domain: &'static str,
    },

    /// The chart partials do not span an n-plane.
    #[error("chart is not an immersion at this point (Gram determinant {gram:e})")]
    RankDeficient { gram: f64 },

    #[error("chart point {0:?} lies outside the chart domain")]
    OutsideChart(Vec<f64>),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    /// The explicit flow rejected a step repeatedly.
    #[error("flow step failed at t = {time}: {reason}")]
    StepFailure { time: f64, reason: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
