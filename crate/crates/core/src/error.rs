use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZhlError {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gamma has a pole at z = {0}")]
    GammaPole(f64),

    #[error("zero base in complex power")]
    ZeroBase,

    #[error("quadrature did not converge after {panels} panels (achieved error {achieved:e})")]
    NonConvergence { panels: usize, achieved: f64 },

    #[error("finite-difference step underflows at x = {0}")]
    StepUnderflow(f64),

    #[error("pole at z = 1")]
    PoleAtOne,

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("integral diverges: x = {x} must exceed {min}")]
    Divergence { x: f64, min: f64 },

    #[error("x = {x} outside the contour window ({lo}, {hi})")]
    Window { x: f64, lo: f64, hi: f64 },

    #[error("contour radius {epsilon} reaches the singularity radius {radius}")]
    ContourTouchesPole { epsilon: f64, radius: f64 },

    #[error("invalid Dirichlet character: {0}")]
    InvalidCharacter(String),

    #[error("cusp form truncation too short: tail bound {bound:e} at t = {t} exceeds {tol:e}")]
    InsufficientCoefficients { t: f64, bound: f64, tol: f64 },

    #[error("taylor self-check failed (relative mismatch {0:e})")]
    RadiusExceeded(f64),

    #[error("no closed-form oracle for kernel {0}")]
    NoOracle(String),

    #[error("kernel {0} has no validated difference form: {1}")]
    NonValidatedForm(String, String),

    #[error("newton iteration did not converge; last iterate {last}, |L| = {residual:e}")]
    NewtonFailed { last: Complex64, residual: f64 },

    #[error("zero or pole too close to the box boundary (|L| = {0:e})")]
    BoundaryTooClose(f64),

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for ZhlError {
    fn from(e: std::io::Error) -> Self {
        ZhlError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for ZhlError {
    fn from(e: serde_json::Error) -> Self {
        ZhlError::Parse(e.to_string())
    }
}

impl From<csv::Error> for ZhlError {
    fn from(e: csv::Error) -> Self {
        ZhlError::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ZhlError>;

pub(crate) fn check_finite(z: Complex64, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(ZhlError::NonFinite(what))
    }
}

pub(crate) fn check_finite_real(x: f64, what: &'static str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(ZhlError::NonFinite(what))
    }
}
