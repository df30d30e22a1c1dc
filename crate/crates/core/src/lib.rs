//! Spectral functions of diamond fractals and reference spectra: heat,
//! Poisson and Weierstrass traces, spectral zeta functions with their complex
//! pole towers, log-periodic fits and high-temperature thermodynamics.

pub mod crossover;
pub mod error;
pub mod fractal_model;
pub mod grid;
pub mod oscillation_fit;
pub mod quadrature;
pub mod series;
pub mod special_fn;
pub mod spectrum;
pub mod sweep;
pub mod thermo;
pub mod traces;
pub mod zeta;

pub use error::{Error, Result};
pub use fractal_model::{BoundaryCondition, DiamondParams, Dimensions, SpectralModel};
pub use spectrum::SpectrumStream;
pub use traces::{TraceMethod, TraceSeries};
pub use zeta::{ComplexPole, PoleSource, Strip};
