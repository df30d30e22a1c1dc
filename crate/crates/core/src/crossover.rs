//! Finite-iteration diamonds between the fractal and the one-dimensional regime.
//!
//! A level-N diamond looks fractal for `l^{-2N} << t << 1` and like a
//! collection of `m^N` segments of length `l^{-N}` below that. Each run reports
//! the trace normalized by the fractal leading term and the time at which it
//! leaves the fractal plateau.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fractal_model::{DiamondParams, SpectralModel};
use crate::spectrum::{weyl_length, SpectrumStream};
use crate::traces::heat_trace_series;
use crate::zeta::{diamond_coefficient, diamond_prefactor};

/// A point is on the plateau when the normalized trace is within this of 1.
pub const PLATEAU_BAND: f64 = 0.02;
/// Departure from the plateau that defines the crossover time.
pub const DEPARTURE: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverRun {
    pub iterations: u32,
    pub t: Vec<f64>,
    pub trace: Vec<f64>,
    /// `K_N / K_fractal_leading`.
    pub fractal_ratio: Vec<f64>,
    /// `K_1D / K_fractal_leading` with `K_1D = L / sqrt(4 pi t)`.
    pub one_d_ratio: Vec<f64>,
    pub weyl_length: f64,
    /// Contiguous stretch of plateau points the crossover walk started from.
    pub plateau: (f64, f64),
    pub t_c: f64,
}

/// Non-oscillating leading term `B/(2 ln l) a_0 t^{-d_s/2}` of the infinite diamond.
pub fn fractal_leading(p: DiamondParams, t: f64) -> Result<f64> {
    Ok(diamond_prefactor(p) * diamond_coefficient(p, 0)?.re * t.powf(-0.5 * p.d_h()))
}

pub fn crossover_experiment(p: DiamondParams, iterations: &[u32], grid: &[f64], tol: f64) -> Result<Vec<CrossoverRun>> {
    if grid.len() < 3 {
        return Err(Error::GridTooNarrow(format!("{} grid points", grid.len())));
    }
    iterations.iter().map(|&n| run(p, n, grid, tol)).collect()
}

fn run(p: DiamondParams, iterations: u32, grid: &[f64], tol: f64) -> Result<CrossoverRun> {
    if iterations == 0 {
        return Err(Error::InvalidParams("crossover needs N >= 1".into()));
    }
    let spec = SpectrumStream::new(SpectralModel::FiniteDiamond { params: p, iterations })?;
    let series = heat_trace_series(&spec, grid, tol)?;
    let lead: Vec<f64> = grid.iter().map(|&t| fractal_leading(p, t)).collect::<Result<_>>()?;
    let length = weyl_length(p, iterations);
    let fractal_ratio: Vec<f64> = series.values.iter().zip(&lead).map(|(k, f)| k / f).collect();
    let one_d_ratio: Vec<f64> = grid.iter().zip(&lead).map(|(t, f)| length / (4.0 * PI * t).sqrt() / f).collect();
    let (plateau, t_c) = crossover_time(grid, &fractal_ratio)?;
    Ok(CrossoverRun {
        iterations,
        t: grid.to_vec(),
        trace: series.values,
        fractal_ratio,
        one_d_ratio,
        weyl_length: length,
        plateau,
        t_c,
    })
}

/// Scans down from the largest-t plateau point to the first departure by more
/// than [`DEPARTURE`]; the crossing is interpolated linearly in `ln t`.
pub fn crossover_time(t: &[f64], ratio: &[f64]) -> Result<((f64, f64), f64)> {
    let dev = |i: usize| (ratio[i] - 1.0).abs();
    let start = (0..t.len())
        .rev()
        .find(|&i| dev(i) <= PLATEAU_BAND)
        .ok_or_else(|| Error::GridTooNarrow("no grid point lies on the fractal plateau".into()))?;
    let mut low = start;
    while low > 0 && dev(low - 1) <= PLATEAU_BAND {
        low -= 1;
    }
    let plateau = (t[low], t[start]);
    let exit = (0..start)
        .rev()
        .find(|&i| dev(i) > DEPARTURE)
        .ok_or_else(|| Error::GridTooNarrow("grid does not reach the one-dimensional regime".into()))?;
    let (i, j) = (exit, exit + 1);
    let w = (DEPARTURE - dev(j)) / (dev(i) - dev(j));
    let ln_tc = t[j].ln() + w * (t[i].ln() - t[j].ln());
    Ok((plateau, ln_tc.exp()))
}
