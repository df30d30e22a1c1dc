//! The Weierstrass function `S(t) = sum_{n>=0} a^n cos(b^n t)`, the real part
//! of the exponential model's Schrödinger trace.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special_fn::ln_gamma_right;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeierstrassMode {
    /// Partial sum over n = 0..=N.
    Direct(u32),
    /// Taylor series plus log-periodic pole sum over |k| <= K.
    Expansion(u32),
}

const TAYLOR_CAP: u32 = 400;

pub fn weierstrass_s(a: f64, b: f64, t: f64, mode: WeierstrassMode) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("Weierstrass sum needs 0 < a <= 1, got {a}")));
    }
    if !(b > 1.0 && b.is_finite()) || !t.is_finite() {
        return Err(Error::Domain(format!("Weierstrass sum needs b > 1 and finite t, got b = {b}, t = {t}")));
    }
    match mode {
        WeierstrassMode::Direct(n_max) => {
            if a >= 1.0 {
                return Err(Error::Domain("direct Weierstrass sum diverges for a = 1".into()));
            }
            let mut sum = 0.0;
            let mut weight = 1.0;
            let mut freq = t;
            for _ in 0..=n_max {
                sum += weight * freq.cos();
                weight *= a;
                freq *= b;
            }
            Ok(sum)
        }
        WeierstrassMode::Expansion(k_max) => expansion(a, b, t, k_max),
    }
}

/// Bound on the omitted terms of `Direct(n_max)`.
pub fn weierstrass_direct_tail(a: f64, n_max: u32) -> f64 {
    a.powi(n_max as i32 + 1) / (1.0 - a)
}

fn resonance(a: f64, b: f64) -> Option<u32> {
    // a b^{2n} = 1  <=>  n = -ln a / (2 ln b)
    let n = -a.ln() / (2.0 * b.ln());
    let r = n.round();
    ((n - r).abs() < 1e-12 && r >= 0.0).then_some(r as u32)
}

fn ln_sin(z: Complex64) -> Complex64 {
    // sin z = e^{-iz} (e^{2iz} - 1) / (2i), stable for Im z >= 0
    if z.im < 0.0 {
        return ln_sin(z.conj()).conj();
    }
    let i = Complex64::i();
    -i * z + (((2.0 * i * z).exp() - 1.0) / (2.0 * i)).ln()
}

/// `Gamma(s) cos(pi s / 2) = pi / (2 Gamma(1 - s) sin(pi s / 2))`, for `Re s < 1/2`.
fn gamma_cos(s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let log = Complex64::new((PI / 2.0).ln(), 0.0) - ln_gamma_right(one - s) - ln_sin(0.5 * PI * s);
    log.exp()
}

fn expansion(a: f64, b: f64, t: f64, k_max: u32) -> Result<f64> {
    if let Some(n) = resonance(a, b) {
        return Err(Error::Resonance { n });
    }
    if t <= 0.0 {
        return Err(Error::Domain(format!("Weierstrass expansion needs t > 0, got {t}")));
    }
    let ln_b = b.ln();

    let mut taylor = 0.0;
    let mut power = 1.0; // (-t^2)^n / (2n)!
    let mut n = 0u32;
    loop {
        let term = power / (1.0 - a * b.powi(2 * n as i32));
        taylor += term;
        if f64::from(n) > t && term.abs() <= 1e-16 * taylor.abs().max(1.0) {
            break;
        }
        n += 1;
        if n > TAYLOR_CAP {
            return Err(Error::Convergence(format!("Taylor part did not converge at t = {t}")));
        }
        let m = f64::from(n);
        power *= -t * t / ((2.0 * m - 1.0) * (2.0 * m));
    }

    let s0 = a.ln() / ln_b;
    let omega = 2.0 * PI / ln_b;
    let mut bracket = gamma_cos(Complex64::new(s0, 0.0)).re;
    for k in 1..=k_max {
        let kf = f64::from(k);
        let phase = Complex64::new(0.0, -omega * kf * t.ln()).exp();
        bracket += 2.0 * (gamma_cos(Complex64::new(s0, omega * kf)) * phase).re;
    }
    Ok(taylor + t.powf(-s0) * bracket / ln_b)
}
