use num_complex::Complex64;
use thiserror::Error;

use crate::zeta::PoleSource;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: Complex64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    /// d_s = 2: the Green's function is logarithmic, not a power law.
    #[error("critical dimension: d_s = {d_s} is within 1e-12 of 2 (logarithmic regime)")]
    CriticalDimension { d_s: f64 },

    #[error("tolerance {tol:e} unreachable within {cap} terms")]
    ToleranceUnreachable { tol: f64, cap: usize },

    #[error("adaptive quadrature stalled: {0}")]
    QuadratureFailure(String),

    #[error("expansion is resonant: a*b^(2n) = 1 at n = {n}")]
    Resonance { n: u32 },

    #[error("zeta function evaluated at a pole ({origin:?}) at {location}")]
    AtPole { location: Complex64, origin: PoleSource },

    #[error("Mellin integral does not converge: {0}")]
    Convergence(String),

    #[error("leading residue of {0} vanishes")]
    ZeroResidue(String),

    #[error("fit window holds {points} points, need at least {required}")]
    WindowTooSmall { points: usize, required: usize },

    #[error("no oscillation detected: amplitude {amplitude:e} < 3 x residual rms {residual_rms:e}")]
    NoOscillationDetected { amplitude: f64, residual_rms: f64 },

    /// The equation-of-state defect was computed, but outside the high-temperature regime.
    #[error("L_s/L_beta = {ratio} is below 20; defect {defect:e} is not expected to be small")]
    RegimeWarning { ratio: f64, defect: f64 },

    #[error("grid too narrow: {0}")]
    GridTooNarrow(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Usage-level errors (bad descriptors, bad parameters) as opposed to numerical failures.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::InvalidParams(_) | Error::Domain(_) | Error::Unsupported(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "PoleError",
            Error::Domain(_) => "DomainError",
            Error::InvalidParams(_) => "InvalidParams",
            Error::CriticalDimension { .. } => "CriticalDimension",
            Error::ToleranceUnreachable { .. } => "ToleranceUnreachable",
            Error::QuadratureFailure(_) => "QuadratureFailure",
            Error::Resonance { .. } => "ResonanceError",
            Error::AtPole { .. } => "AtPole",
            Error::Convergence(_) => "ConvergenceError",
            Error::ZeroResidue(_) => "ZeroResidue",
            Error::WindowTooSmall { .. } => "WindowTooSmall",
            Error::NoOscillationDetected { .. } => "NoOscillationDetected",
            Error::RegimeWarning { .. } => "RegimeWarning",
            Error::GridTooNarrow(_) => "GridTooNarrow",
            Error::Unsupported(_) => "Unsupported",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            Error::Io(e.to_string())
        } else {
            Error::Parse(e.to_string())
        }
    }
}
