//! Heat, Poisson and Schrödinger-type traces: exact series and pole expansions.

mod asymptotic;
pub(crate) mod kernel;
mod weierstrass;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::{try_integrate, Tolerance};
use crate::spectrum::SpectrumStream;
use crate::sweep;

pub use asymptotic::{heat_trace_asymptotic_diamond, heat_trace_asymptotic_exponential};
pub use kernel::{bose_tower, theta_tail, theta_tail_direct, theta_tail_dual, Summation};
pub use weierstrass::{weierstrass_direct_tail, weierstrass_s, WeierstrassMode};

use kernel::{sum_kernel, Kernel, DEFAULT_FAMILY_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMethod {
    Exact,
    /// Pole expansion keeping M oscillatory pairs.
    Asymptotic(u32),
    Leading,
    /// Poisson trace via the heat-kernel subordination integral.
    Transform,
    /// Weierstrass sum truncated at n <= N.
    Direct(u32),
    /// Weierstrass resummation truncated at |k| <= K.
    Expansion(u32),
}

impl fmt::Display for TraceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceMethod::Exact => write!(f, "exact"),
            TraceMethod::Asymptotic(m) => write!(f, "asymptotic({m})"),
            TraceMethod::Leading => write!(f, "leading"),
            TraceMethod::Transform => write!(f, "transform"),
            TraceMethod::Direct(n) => write!(f, "direct({n})"),
            TraceMethod::Expansion(k) => write!(f, "expansion({k})"),
        }
    }
}

impl FromStr for TraceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let arg = |prefix: &str| -> Option<Result<u32>> {
            let inner = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            Some(inner.parse().map_err(|_| Error::Parse(format!("bad method argument in '{s}'"))))
        };
        match s {
            "exact" => return Ok(TraceMethod::Exact),
            "leading" => return Ok(TraceMethod::Leading),
            "transform" => return Ok(TraceMethod::Transform),
            _ => {}
        }
        if let Some(m) = arg("asymptotic") {
            return m.map(TraceMethod::Asymptotic);
        }
        if let Some(n) = arg("direct") {
            return n.map(TraceMethod::Direct);
        }
        if let Some(k) = arg("expansion") {
            return k.map(TraceMethod::Expansion);
        }
        Err(Error::Parse(format!("unknown trace method '{s}'")))
    }
}

/// Sampled trace values over a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSeries {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    pub method: TraceMethod,
    pub tail_bound: Vec<f64>,
}

impl TraceSeries {
    pub fn new(t: Vec<f64>, values: Vec<f64>, method: TraceMethod, tail_bound: Vec<f64>) -> Result<Self> {
        if t.len() != values.len() || t.len() != tail_bound.len() {
            return Err(Error::InvalidParams("trace series columns differ in length".into()));
        }
        if t.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParams("trace series grid is not strictly increasing".into()));
        }
        Ok(Self { t, values, method, tail_bound })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Points with `t_min <= t <= t_max`.
    pub fn window(&self, t_min: f64, t_max: f64) -> Vec<(f64, f64)> {
        self.t
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| **t >= t_min && **t <= t_max)
            .map(|(t, v)| (*t, *v))
            .collect()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time argument must be positive and finite, got {t}")))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("tolerance must lie in (0, 1), got {tol}")))
    }
}

/// `K(t) = sum deg exp(-lambda t)` to absolute accuracy `tol`.
pub fn heat_trace(spec: &SpectrumStream, t: f64, tol: f64) -> Result<f64> {
    heat_trace_summation(spec, t, tol).map(|s| s.value)
}

pub fn heat_trace_summation(spec: &SpectrumStream, t: f64, tol: f64) -> Result<Summation> {
    check_time(t)?;
    check_tol(tol)?;
    sum_kernel(spec, Kernel::Heat(t), tol, DEFAULT_FAMILY_CAP)
}

pub fn heat_trace_series(spec: &SpectrumStream, grid: &[f64], tol: f64) -> Result<TraceSeries> {
    let sums = sweep::try_map(grid, |&t| heat_trace_summation(spec, t, tol))?;
    TraceSeries::new(
        grid.to_vec(),
        sums.iter().map(|s| s.value).collect(),
        TraceMethod::Exact,
        sums.iter().map(|s| s.tail_bound).collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoissonMethod {
    Direct,
    Transform,
}

/// `P(t) = sum deg exp(-sqrt(lambda) t)`.
pub fn poisson_trace(spec: &SpectrumStream, t: f64, method: PoissonMethod, tol: f64) -> Result<f64> {
    poisson_trace_summation(spec, t, method, tol).map(|s| s.value)
}

pub fn poisson_trace_summation(spec: &SpectrumStream, t: f64, method: PoissonMethod, tol: f64) -> Result<Summation> {
    check_time(t)?;
    check_tol(tol)?;
    match method {
        PoissonMethod::Direct => sum_kernel(spec, Kernel::Poisson(t), tol, DEFAULT_FAMILY_CAP),
        PoissonMethod::Transform => poisson_transform(spec, t, tol),
    }
}

/// `P(t) = (2/sqrt(pi)) int_0^inf exp(-v^2) K(t^2/(4 v^2)) dv`.
fn poisson_transform(spec: &SpectrumStream, t: f64, tol: f64) -> Result<Summation> {
    let inner_tol = (tol * 1e-3).max(1e-300);
    let integrand = |v: f64| -> Result<f64> {
        let tau = t * t / (4.0 * v * v);
        if !tau.is_finite() {
            return Ok(spec.zero_modes() * (-v * v).exp());
        }
        Ok((-v * v).exp() * heat_trace(spec, tau, inner_tol)?)
    };
    // K(t^2/4v^2) grows at most polynomially in v, so exp(-v^2) settles the cutoff
    let mut upper = 6.0_f64;
    while (-upper * upper).exp() * heat_trace(spec, t * t / (4.0 * upper * upper), inner_tol)? * upper > tol * 1e-3 {
        upper += 1.0;
        if upper > 40.0 {
            return Err(Error::QuadratureFailure("Poisson transform cutoff did not settle".into()));
        }
    }
    let quad_tol = Tolerance::new(0.1 * tol, 1e-15);
    let norm = 2.0 / std::f64::consts::PI.sqrt();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    for (a, b) in [(0.0, 1.0), (1.0, upper)] {
        let r = try_integrate(integrand, a, b, quad_tol)?;
        value += r.value;
        error += r.error;
        evaluations += r.evaluations;
    }
    Ok(Summation { value: norm * value, tail_bound: norm * error, families: evaluations })
}

pub fn poisson_trace_series(spec: &SpectrumStream, grid: &[f64], method: PoissonMethod, tol: f64) -> Result<TraceSeries> {
    let sums = sweep::try_map(grid, |&t| poisson_trace_summation(spec, t, method, tol))?;
    let label = match method {
        PoissonMethod::Direct => TraceMethod::Exact,
        PoissonMethod::Transform => TraceMethod::Transform,
    };
    TraceSeries::new(
        grid.to_vec(),
        sums.iter().map(|s| s.value).collect(),
        label,
        sums.iter().map(|s| s.tail_bound).collect(),
    )
}
