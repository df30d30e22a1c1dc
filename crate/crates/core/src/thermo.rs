//! Thermodynamics of a massless boson on a spectral model.
//!
//! Mode frequencies are `sqrt(lambda)/L_s` with `hbar = c = 1`, so the thermal
//! wavelength is `L_beta = beta`. The thermal part of `ln Z` is the per-mode
//! Bose sum; the vacuum energy is the zeta-regularized `zeta(-1/2) / (2 L_s)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{try_integrate, Tolerance};
use crate::special_fn::theta3_factor;
use crate::spectrum::SpectrumStream;
use crate::sweep;
use crate::traces::kernel::{sum_kernel, Kernel, DEFAULT_FAMILY_CAP};
use crate::traces::{heat_trace, theta_tail};
use crate::zeta::{leading_real_pole, spectral_volume, zeta_eval};

/// Below this `L_s / L_beta` the equation-of-state defect is not expected to be small.
pub const HIGH_TEMPERATURE_RATIO: f64 = 20.0;
const STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoState {
    pub beta: f64,
    pub l_s: f64,
    pub l_beta: f64,
    pub ln_z_thermal: f64,
    /// `None` when the model has no closed-form continuation to `s = -1/2`.
    pub e_vac: Option<f64>,
    pub u: f64,
    pub p: f64,
    pub v_s: f64,
    pub eos_defect: f64,
}

impl ThermoState {
    pub fn compute(spec: &SpectrumStream, l_s: f64, beta: f64, tol: f64) -> Result<Self> {
        let (ln_z_thermal, e_vac) = log_partition(spec, l_s, beta, tol)?;
        let u = internal_energy(spec, l_s, beta, tol)?;
        let p = pressure(spec, l_s, beta, tol)?;
        let v_s = spectral_volume(spec.model(), l_s)?;
        let d = volume_exponent(spec);
        let eos_defect = (p * v_s - u / d).abs() / (u / d);
        Ok(Self { beta, l_s, l_beta: beta, ln_z_thermal, e_vac, u, p, v_s, eos_defect })
    }

    pub fn ratio(&self) -> f64 {
        self.l_s / self.l_beta
    }
}

fn check_state(l_s: f64, beta: f64) -> Result<()> {
    if !(l_s > 0.0 && l_s.is_finite() && beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("need L_s > 0 and beta > 0, got L_s = {l_s}, beta = {beta}")));
    }
    Ok(())
}

/// Exponent of `V_s ∝ L_s^d`: twice the leading real pole, which is `d_s` for
/// diamonds and `d` for smooth spectra.
fn volume_exponent(spec: &SpectrumStream) -> f64 {
    2.0 * leading_real_pole(spec.model())
}

fn thermal(spec: &SpectrumStream, l_s: f64, beta: f64, tol: f64) -> Result<f64> {
    check_state(l_s, beta)?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    sum_kernel(spec, Kernel::Bose(beta / l_s), tol, DEFAULT_FAMILY_CAP).map(|s| s.value)
}

/// `(ln Z_thermal, E_vac)`; zero modes carry no oscillator and are skipped.
pub fn log_partition(spec: &SpectrumStream, l_s: f64, beta: f64, tol: f64) -> Result<(f64, Option<f64>)> {
    let ln_z = thermal(spec, l_s, beta, tol)?;
    let e_vac = match zeta_eval(spec.model(), Complex64::new(-0.5, 0.0)) {
        Ok(z) => Some(z.re / (2.0 * l_s)),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    Ok((ln_z, e_vac))
}

/// Central difference with one Richardson step.
fn derivative(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let central = |h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    let (coarse, fine) = (central(h)?, central(0.5 * h)?);
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `U = -d ln Z_thermal / d beta`.
pub fn internal_energy(spec: &SpectrumStream, l_s: f64, beta: f64, tol: f64) -> Result<f64> {
    check_state(l_s, beta)?;
    Ok(-derivative(|b| thermal(spec, l_s, b, tol), beta, STEP * beta)?)
}

/// `P = (1/beta) d ln Z / d V_s`, differentiated in `L_s` with `dV_s/dL_s = d V_s / L_s`.
pub fn pressure(spec: &SpectrumStream, l_s: f64, beta: f64, tol: f64) -> Result<f64> {
    check_state(l_s, beta)?;
    let dlnz_dl = derivative(|l| thermal(spec, l, beta, tol), l_s, STEP * l_s)?;
    let v_s = spectral_volume(spec.model(), l_s)?;
    let dv_dl = volume_exponent(spec) * v_s / l_s;
    Ok(dlnz_dl / (beta * dv_dl))
}

/// `|P V_s - U/d_s| / (U/d_s)`. Below the high-temperature regime the defect is
/// returned inside [`Error::RegimeWarning`].
pub fn eos_check(spec: &SpectrumStream, l_s: f64, beta: f64, tol: f64) -> Result<f64> {
    let state = ThermoState::compute(spec, l_s, beta, tol)?;
    let ratio = state.ratio();
    if ratio < HIGH_TEMPERATURE_RATIO {
        return Err(Error::RegimeWarning { ratio, defect: state.eos_defect });
    }
    Ok(state.eos_defect)
}

/// `|beta U / (d_s ln Z) - 1|`: how far the state is from the pure Weyl-law
/// scaling `ln Z ∝ (L_s/L_beta)^{d_s}`.
pub fn weyl_defect(spec: &SpectrumStream, l_s: f64, beta: f64, tol: f64) -> Result<f64> {
    let ln_z = thermal(spec, l_s, beta, tol)?;
    let u = internal_energy(spec, l_s, beta, tol)?;
    Ok((beta * u / (volume_exponent(spec) * ln_z) - 1.0).abs())
}

/// Least-squares slope of `ln ln Z` against `ln(L_s/L_beta)` over `points`
/// log-spaced ratios in `[r_min, r_max]`.
pub fn scaling_exponent(spec: &SpectrumStream, r_min: f64, r_max: f64, points: usize, tol: f64) -> Result<f64> {
    if !(r_min > 0.0 && r_max > r_min && points >= 2) {
        return Err(Error::Domain(format!("bad ratio range [{r_min}, {r_max}] with {points} points")));
    }
    let ratios = crate::grid::log_grid(r_min, r_max, points);
    let ln_z = sweep::try_map(&ratios, |&r| thermal(spec, r, 1.0, tol))?;
    let xs: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = ln_z.iter().map(|z| z.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// States at `beta = 1` and `L_s = ratio`, evaluated concurrently.
pub fn thermo_sweep(spec: &SpectrumStream, ratios: &[f64], tol: f64) -> Result<Vec<ThermoState>> {
    sweep::try_map(ratios, |&r| ThermoState::compute(spec, r, 1.0, tol))
}

/// `Theta3(x) - sqrt(pi/x)`: the Matsubara sum with its vacuum (`j = 0` dual) term removed.
fn thermal_theta(x: f64) -> Result<f64> {
    if x >= PI {
        Ok(theta3_factor(x)? - (PI / x).sqrt())
    } else {
        Ok(2.0 * (PI / x).sqrt() * theta_tail(1.0 / x))
    }
}

/// Thermal `ln Z` from the proper-time form
/// `(1/2) int dtau/tau [Theta3((2 pi/beta)^2 tau) - sqrt(pi/x)] K_nz(tau/L_s^2)`,
/// integrated in `ln tau`. Independent of the mode sum; used as a cross-check.
pub fn log_partition_proper_time(spec: &SpectrumStream, l_s: f64, beta: f64, tol: f64) -> Result<f64> {
    check_state(l_s, beta)?;
    let zero = spec.zero_modes();
    let omega = 2.0 * PI / beta;
    // exp(-beta^2 / 4 tau) underflows below tau_lo
    let tau_lo = beta * beta / (4.0 * 700.0);
    let tau_hi = l_s * l_s * 60.0 / spec.lowest_nonzero() + beta * beta;
    let integrand = |y: f64| -> Result<f64> {
        let tau = y.exp();
        let k = heat_trace(spec, tau / (l_s * l_s), 1e-3 * tol)? - zero;
        Ok(0.5 * thermal_theta(omega * omega * tau)? * k)
    };
    let r = try_integrate(integrand, tau_lo.ln(), tau_hi.ln(), Tolerance::new(tol, 1e-12))?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal_model::{BoundaryCondition, DiamondParams, SpectralModel};
    use approx::assert_relative_eq;

    fn stream(model: SpectralModel) -> SpectrumStream {
        SpectrumStream::new(model).unwrap()
    }

    #[test]
    fn interval_frozen_values_and_vacuum() {
        let s = stream(SpectralModel::Interval(BoundaryCondition::Dirichlet));
        let (ln_z, e_vac) = log_partition(&s, 100.0, 1.0, 1e-12).unwrap();
        // pi^2 r/6 - ln(2 pi r)/2 - 1/(24 r) plus exponentially small terms
        let r = 100.0;
        assert_relative_eq!(ln_z, PI * PI * r / 6.0 - 0.5 * (2.0 * PI * r).ln() - 1.0 / (24.0 * r), max_relative = 1e-12);
        assert_relative_eq!(e_vac.unwrap(), -1.0 / (24.0 * 100.0), max_relative = 1e-12);
        let sphere = stream(SpectralModel::Sphere { d: 2 });
        assert_eq!(log_partition(&sphere, 10.0, 1.0, 1e-10).unwrap().1, None);
    }

    #[test]
    fn boltzmann_limit() {
        let s = stream(SpectralModel::Interval(BoundaryCondition::Dirichlet));
        let (ln_z, _) = log_partition(&s, 1.0, 30.0, 1e-14).unwrap();
        assert_relative_eq!(ln_z, (-30.0f64).exp(), max_relative = 1e-6);
    }

    #[test]
    fn energy_and_pressure_are_consistent() {
        for model in [
            SpectralModel::Diamond(DiamondParams::new(6, 3).unwrap()),
            SpectralModel::Interval(BoundaryCondition::Neumann),
        ] {
            let s = stream(model);
            let st = ThermoState::compute(&s, 30.0, 1.0, 1e-11).unwrap();
            assert!(st.p > 0.0 && st.u > 0.0 && st.ln_z_thermal > 0.0);
            // ln Z depends on beta/L_s only, so (L_s/beta) d/dL_s and -d/dbeta agree
            assert!(st.eos_defect < 1e-6, "{model}: {}", st.eos_defect);
        }
    }

    #[test]
    fn regime_warning_carries_defect() {
        let s = stream(SpectralModel::Interval(BoundaryCondition::Dirichlet));
        match eos_check(&s, 5.0, 1.0, 1e-12) {
            Err(Error::RegimeWarning { ratio, defect }) => {
                assert_eq!(ratio, 5.0);
                assert!(defect.is_finite());
            }
            other => panic!("expected a regime warning, got {other:?}"),
        }
    }

    #[test]
    fn proper_time_form_matches_mode_sum() {
        let s = stream(SpectralModel::Interval(BoundaryCondition::Dirichlet));
        let modes = log_partition(&s, 5.0, 1.0, 1e-13).unwrap().0;
        let proper = log_partition_proper_time(&s, 5.0, 1.0, 1e-11).unwrap();
        assert_relative_eq!(proper, modes, max_relative = 1e-8);
    }

    #[test]
    fn interval_scaling_has_boundary_correction() {
        let s = stream(SpectralModel::Interval(BoundaryCondition::Dirichlet));
        let slope = scaling_exponent(&s, 50.0, 200.0, 17, 1e-11).unwrap();
        // ln Z = c r - ln(2 pi r)/2 bends the log-log slope just above 1
        assert!(slope > 1.0 && slope < 1.03, "{slope}");
    }
}
