//! Pole expansions of the heat trace at small t.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fractal_model::{DiamondParams, SpectralModel};
use crate::special_fn::gamma;
use crate::zeta::{diamond_coefficient, diamond_prefactor, zeta_eval};

/// `B/(d_w ln l) t^{-d_s/2} (a_0 + sum_{m=1}^{M} 2 Re(a_m t^{-2 pi i m/(d_w ln l)})) + zeta_D(0)`.
pub fn heat_trace_asymptotic_diamond(p: DiamondParams, t: f64, m_max: u32) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time argument must be positive, got {t}")));
    }
    let omega = std::f64::consts::PI / p.ln_l();
    let ln_t = t.ln();
    let mut bracket = diamond_coefficient(p, 0)?.re;
    for m in 1..=i64::from(m_max) {
        let phase = Complex64::new(0.0, -omega * m as f64 * ln_t).exp();
        bracket += 2.0 * (diamond_coefficient(p, m)? * phase).re;
    }
    let constant = zeta_eval(&SpectralModel::Diamond(p), Complex64::new(0.0, 0.0))?.re;
    Ok(diamond_prefactor(p) * t.powf(-0.5 * p.d_h()) * bracket + constant)
}

/// `(1/ln b) t^{-ln a/ln b} [Gamma(s_0) + sum_{m=1}^{M} 2 Re(Gamma(s_m) exp(-2 pi i m ln t/ln b))]`.
pub fn heat_trace_asymptotic_exponential(a: f64, b: f64, t: f64, m_max: u32) -> Result<f64> {
    if !(a > 1.0 && b > 1.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("exponential asymptotics need a > 1 and b > 1, got a = {a}, b = {b}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time argument must be positive, got {t}")));
    }
    let ln_b = b.ln();
    let s0 = a.ln() / ln_b;
    let omega = 2.0 * std::f64::consts::PI / ln_b;
    let ln_t = t.ln();
    let mut bracket = gamma(Complex64::new(s0, 0.0))?.re;
    for m in 1..=m_max {
        let s = Complex64::new(s0, omega * f64::from(m));
        let phase = Complex64::new(0.0, -omega * f64::from(m) * ln_t).exp();
        bracket += 2.0 * (gamma(s)? * phase).re;
    }
    Ok(t.powf(-s0) * bracket / ln_b)
}
