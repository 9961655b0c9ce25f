use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown cost name `{0}`")]
    UnknownCost(String),

    #[error("invalid cost parameters: {0}")]
    InvalidParams(String),

    #[error("dimension must be at least {min}, got {got}")]
    BadDimension { min: usize, got: usize },

    #[error("cost pair outside the validity domain: {0}")]
    InvalidPair(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("Newton inversion did not converge after {iterations} iterations (residual {residual:.3e})")]
    NewtonDiverged { iterations: usize, residual: f64 },

    #[error("mixed-derivative Jacobian is numerically singular (|det| = {det:.3e}) at an iterate")]
    JacobianSingular { det: f64 },

    #[error("Newton iterate left the validity domain at step {iteration}")]
    IterateEscaped { iteration: usize },

    #[error("c-segment solve failed at theta = {theta}: {source}")]
    SegmentFailed {
        theta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("stencil point invalid at offset (t={t}, s={s}): {reason}")]
    StencilInvalid { t: f64, s: f64, reason: String },

    #[error("no valid sample pair found after {attempts} attempts")]
    NoValidSample { attempts: usize },

    #[error("contact set empty: tolerance {tol:.3e} is below the grid resolution")]
    EmptyContact { tol: f64 },

    #[error("marginals are infeasible: total masses differ by {gap:.3e}")]
    Infeasible { gap: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
