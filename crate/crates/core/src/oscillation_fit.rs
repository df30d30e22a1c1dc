//! Spectral dimension and log-periodic parameters estimated from sampled traces.
//!
//! The fit model for `R(t) = t^{d_s/2} K(t)` is
//! `C + D t^{d_s/2} + A cos(w ln t) + B sin(w ln t)`: the `D` column absorbs the
//! constant `zeta(0)` term of `K`, which otherwise leaks a smooth trend into
//! the residual. The model is linear in `(C, D, A, B)` for fixed `w`; `w` is
//! scanned on a 200-point grid and refined by golden-section search.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sweep;
use crate::traces::TraceSeries;

pub const MIN_WINDOW_POINTS: usize = 32;
const OMEGA_CANDIDATES: usize = 200;
const GOLDEN_TOL: f64 = 1e-10;
/// Amplitudes below this fraction of the baseline are treated as rounding noise.
const AMPLITUDE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationFit {
    pub d_s: f64,
    /// Relative amplitude `sqrt(A^2 + B^2)` over the mean fitted baseline.
    pub amplitude: f64,
    /// Angular frequency per unit `ln t`.
    pub omega: f64,
    pub phase: f64,
    /// Residual RMS relative to the same baseline.
    pub residual_rms: f64,
    pub t_min: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FitOptions {
    /// Expected angular frequency; narrows the scan to `[0.5, 3] x hint`.
    pub omega_hint: Option<f64>,
    /// Restrict to `t_min <= t <= t_max`.
    pub window: Option<(f64, f64)>,
}

fn select(series: &TraceSeries, window: Option<(f64, f64)>) -> Result<Vec<(f64, f64)>> {
    let points = match window {
        Some((lo, hi)) => series.window(lo, hi),
        None => series.t.iter().copied().zip(series.values.iter().copied()).collect(),
    };
    if points.len() < MIN_WINDOW_POINTS {
        return Err(Error::WindowTooSmall { points: points.len(), required: MIN_WINDOW_POINTS });
    }
    if points.iter().any(|(_, k)| !(*k > 0.0)) {
        return Err(Error::Domain("trace values must be positive to take logarithms".into()));
    }
    Ok(points)
}

/// `-2` times the least-squares slope of `ln K` against `ln t`.
///
/// With a `period` (in `ln t`) the window is trimmed from above to a whole
/// number of periods so the log-periodic ripple averages out.
pub fn estimate_spectral_dimension(series: &TraceSeries, t_min: f64, t_max: f64, period: Option<f64>) -> Result<f64> {
    let mut points = select(series, Some((t_min, t_max)))?;
    if let Some(p) = period.filter(|p| *p > 0.0) {
        let x0 = points[0].0.ln();
        let span = points[points.len() - 1].0.ln() - x0;
        let periods = (span / p).floor();
        if periods >= 1.0 {
            let x_end = x0 + periods * p * (1.0 + 1e-12);
            points.retain(|(t, _)| t.ln() <= x_end);
        }
        if points.len() < MIN_WINDOW_POINTS {
            return Err(Error::WindowTooSmall { points: points.len(), required: MIN_WINDOW_POINTS });
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, k)| k.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(-2.0 * sxy / sxx)
}

/// Least squares by modified Gram-Schmidt; returns coefficients and residual vector.
fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let k = columns.len();
    let mut q: Vec<Vec<f64>> = columns.to_vec();
    let mut r = vec![vec![0.0; k]; k];
    for j in 0..k {
        for i in 0..j {
            let dot: f64 = q[i].iter().zip(&q[j]).map(|(a, b)| a * b).sum();
            r[i][j] = dot;
            let qi = q[i].clone();
            q[j].iter_mut().zip(&qi).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = q[j].iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        r[j][j] = norm;
        q[j].iter_mut().for_each(|a| *a /= norm);
    }
    let qty: Vec<f64> = q.iter().map(|col| col.iter().zip(y).map(|(a, b)| a * b).sum()).collect();
    let mut coef = vec![0.0; k];
    for j in (0..k).rev() {
        let s: f64 = (j + 1..k).map(|i| r[j][i] * coef[i]).sum();
        coef[j] = (qty[j] - s) / r[j][j];
    }
    let residual: Vec<f64> = (0..y.len())
        .map(|i| y[i] - (0..k).map(|j| coef[j] * columns[j][i]).sum::<f64>())
        .collect();
    Some((coef, residual))
}

struct Design {
    x: Vec<f64>,
    trend: Vec<f64>,
    r: Vec<f64>,
}

impl Design {
    fn solve(&self, omega: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let ones = vec![1.0; self.x.len()];
        let cos: Vec<f64> = self.x.iter().map(|x| (omega * x).cos()).collect();
        let sin: Vec<f64> = self.x.iter().map(|x| (omega * x).sin()).collect();
        least_squares(&[ones, self.trend.clone(), cos, sin], &self.r)
    }

    fn rss(&self, omega: f64) -> f64 {
        self.solve(omega)
            .map(|(_, res)| res.iter().map(|e| e * e).sum())
            .unwrap_or(f64::INFINITY)
    }
}

pub fn fit_log_periodic(series: &TraceSeries, d_s: f64, options: FitOptions) -> Result<OscillationFit> {
    if !(d_s > 0.0 && d_s.is_finite()) {
        return Err(Error::Domain(format!("spectral dimension must be positive, got {d_s}")));
    }
    let points = select(series, options.window)?;
    let half = 0.5 * d_s;
    let t_max = points[points.len() - 1].0;
    let design = Design {
        x: points.iter().map(|(t, _)| t.ln()).collect(),
        trend: points.iter().map(|(t, _)| (t / t_max).powf(half)).collect(),
        r: points.iter().map(|(t, k)| t.powf(half) * k).collect(),
    };
    let span = design.x[design.x.len() - 1] - design.x[0];
    let (lo, hi) = match options.omega_hint {
        Some(w) if w > 0.0 => (0.5 * w, 3.0 * w),
        Some(w) => return Err(Error::Domain(format!("frequency hint must be positive, got {w}"))),
        None => (2.0 * PI / span, 20.0_f64.max(4.0 * PI / span)),
    };
    let candidates: Vec<f64> = (0..OMEGA_CANDIDATES)
        .map(|j| lo + (hi - lo) * j as f64 / (OMEGA_CANDIDATES - 1) as f64)
        .collect();
    let scores = sweep::map(&candidates, |&w| design.rss(w));
    let best = scores
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let a = candidates[best.saturating_sub(1)];
    let b = candidates[(best + 1).min(OMEGA_CANDIDATES - 1)];
    let omega = golden_section(|w| design.rss(w), a, b, GOLDEN_TOL);

    let (coef, residual) = design
        .solve(omega)
        .ok_or_else(|| Error::Convergence("degenerate least-squares design".into()))?;
    // baseline: the non-oscillatory part of the fit averaged over the window
    let mean_trend = design.trend.iter().sum::<f64>() / design.trend.len() as f64;
    let mean_r = coef[0] + coef[1] * mean_trend;
    let amplitude = coef[2].hypot(coef[3]);
    let rms = (residual.iter().map(|e| e * e).sum::<f64>() / residual.len() as f64).sqrt();
    if amplitude < 3.0 * rms || amplitude < AMPLITUDE_FLOOR * mean_r.abs() {
        return Err(Error::NoOscillationDetected { amplitude: amplitude / mean_r, residual_rms: rms / mean_r });
    }
    if span * omega / (2.0 * PI) < 2.0 {
        return Err(Error::GridTooNarrow(format!(
            "window spans {:.3} periods of the fitted oscillation, need 2",
            span * omega / (2.0 * PI)
        )));
    }
    Ok(OscillationFit {
        d_s,
        amplitude: amplitude / mean_r,
        omega,
        phase: (-coef[3]).atan2(coef[2]),
        residual_rms: rms / mean_r,
        t_min: points[0].0,
        t_max,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::log_grid;
    use crate::traces::TraceMethod;

    fn synthetic(d_s: f64, alpha: f64, omega: f64, phase: f64) -> TraceSeries {
        let t = log_grid(1e-8, 1e-4, 400);
        let values = t
            .iter()
            .map(|t| t.powf(-0.5 * d_s) * (1.0 + alpha * (omega * t.ln() + phase).cos()))
            .collect();
        let n = t.len();
        TraceSeries::new(t, values, TraceMethod::Exact, vec![0.0; n]).unwrap()
    }

    #[test]
    fn recovers_synthetic_parameters() {
        let s = synthetic(1.7, 0.02, 2.9, 0.4);
        let fit = fit_log_periodic(&s, 1.7, FitOptions::default()).unwrap();
        assert!((fit.omega - 2.9).abs() < 1e-8);
        assert!((fit.amplitude - 0.02).abs() < 1e-8);
        assert!((fit.phase - 0.4).abs() < 1e-6);
        let hinted = fit_log_periodic(&s, 1.7, FitOptions { omega_hint: Some(3.0), window: None }).unwrap();
        assert!((hinted.omega - 2.9).abs() < 1e-8);
    }

    #[test]
    fn flat_series_has_no_oscillation() {
        let s = synthetic(1.0, 0.0, 1.0, 0.0);
        assert!(matches!(
            fit_log_periodic(&s, 1.0, FitOptions::default()),
            Err(Error::NoOscillationDetected { .. })
        ));
    }

    #[test]
    fn slope_and_window_checks() {
        let s = synthetic(2.3, 0.0, 1.0, 0.0);
        let d = estimate_spectral_dimension(&s, 1e-8, 1e-4, None).unwrap();
        assert!((d - 2.3).abs() < 1e-12);
        assert!(matches!(
            estimate_spectral_dimension(&s, 1e-8, 1.02e-8, None),
            Err(Error::WindowTooSmall { required: 32, .. })
        ));
    }

    #[test]
    fn least_squares_exact_fit() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|x| 2.0 - 0.5 * x).collect();
        let (c, r) = least_squares(&[vec![1.0; 10], x], &y).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-14 && (c[1] + 0.5).abs() < 1e-14);
        assert!(r.iter().all(|e| e.abs() < 1e-13));
    }
}
