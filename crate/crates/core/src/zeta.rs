//! Spectral zeta functions: closed forms, Mellin transforms of the heat trace,
//! analytic pole lists and residue-sum reconstruction of `K(t)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fractal_model::{BoundaryCondition, DiamondParams, SpectralModel};
use crate::quadrature::{try_integrate, Tolerance};
use crate::special_fn::{gamma, gamma_real, riemann_zeta, upper_incomplete_gamma};
use crate::spectrum::SpectrumStream;
use crate::traces::heat_trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleSource {
    DiamondTower,
    RiemannFactor,
    GammaFactor,
    ToyTower,
}

impl fmt::Display for PoleSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoleSource::DiamondTower => "diamond_tower",
            PoleSource::RiemannFactor => "riemann_factor",
            PoleSource::GammaFactor => "gamma_factor",
            PoleSource::ToyTower => "toy_tower",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPole {
    pub location: Complex64,
    pub residue: Complex64,
    pub tower_index: i64,
    pub source: PoleSource,
}

/// Rectangle `re_min <= Re s <= re_max`, `im_min <= Im s <= im_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strip {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Strip {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let all_finite = [re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite());
        if !all_finite || re_min > re_max || im_min > im_max {
            return Err(Error::Domain(format!("strip [{re_min}, {re_max}] x [{im_min}, {im_max}] is not a finite rectangle")));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.re_min && s.re <= self.re_max && s.im >= self.im_min && s.im <= self.im_max
    }
}

impl FromStr for Strip {
    type Err = Error;

    /// `re_min:re_max:im_min:im_max`
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(':')
            .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad strip bound '{x}'"))))
            .collect::<Result<_>>()?;
        match v.as_slice() {
            [a, b, c, d] => Strip::new(*a, *b, *c, *d).map_err(|e| Error::Parse(e.to_string())),
            _ => Err(Error::Parse(format!("strip '{s}' is not re_min:re_max:im_min:im_max"))),
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn expm1c(z: Complex64) -> Complex64 {
    if z.norm() < 1e-2 {
        // z + z^2/2! + ... + z^8/8!
        let mut term = z;
        let mut sum = z;
        for k in 2..=8 {
            term *= z / k as f64;
            sum += term;
        }
        sum
    } else {
        z.exp() - 1.0
    }
}

fn pi_pow(s: Complex64) -> Complex64 {
    (-2.0 * s * PI.ln()).exp()
}

fn near_integer(x: f64, tol: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() < tol).then_some(r as i64)
}

/// Tower pole `s_m = d_s/2 + 2 pi i m / (d_w ln l)` of a diamond.
pub fn diamond_tower_pole(p: DiamondParams, m: i64) -> Complex64 {
    c(0.5 * p.d_h(), PI * m as f64 / p.ln_l())
}

/// Residue `zeta_R(2 s_m) pi^{-2 s_m} B / (d_w ln l)` at tower pole m.
pub fn diamond_tower_residue(p: DiamondParams, m: i64) -> Result<Complex64> {
    let s = diamond_tower_pole(p, m);
    Ok(riemann_zeta(2.0 * s)? * pi_pow(s) * f64::from(p.branching()) / (2.0 * p.ln_l()))
}

/// `a_m = Gamma(s_m) zeta_R(2 s_m) / pi^{2 s_m}`.
pub fn diamond_coefficient(p: DiamondParams, m: i64) -> Result<Complex64> {
    let s = diamond_tower_pole(p, m);
    Ok(gamma(s)? * riemann_zeta(2.0 * s)? * pi_pow(s))
}

/// `(l^{d_h - 1} - 1) / (d_w ln l)`.
pub fn diamond_prefactor(p: DiamondParams) -> f64 {
    f64::from(p.branching()) / (2.0 * p.ln_l())
}

fn diamond_zeta(p: DiamondParams, s: Complex64) -> Result<Complex64> {
    let ln_l = p.ln_l();
    let d_h = p.d_h();
    // denominator 1 - l^{d_h - 2s} vanishes on the tower
    let x = (d_h - 2.0 * s.re) * ln_l;
    if x.abs() < 1e-13 {
        if let Some(m) = near_integer(s.im * ln_l / PI, 1e-10) {
            return Err(Error::AtPole { location: diamond_tower_pole(p, m), origin: PoleSource::DiamondTower });
        }
    }
    let ratio = f64::from(p.m()) / f64::from(p.l());
    if (s - 0.5).norm() < 1e-12 {
        // removable: zeta_R(2s) ~ 1/(2s - 1) against 1 - l^{1-2s} ~ (2s - 1) ln l
        return Ok(c(ratio * ln_l / (PI * (1.0 - ratio)), 0.0));
    }
    let numerator = -ratio * expm1c((1.0 - 2.0 * s) * ln_l);
    let denominator = -expm1c((d_h - 2.0 * s) * ln_l);
    Ok(riemann_zeta(2.0 * s)? * pi_pow(s) * numerator / denominator)
}

fn finite_diamond_bracket(p: DiamondParams, iterations: u32, s: Complex64) -> Complex64 {
    let step = ((p.d_h() - 2.0 * s) * p.ln_l()).exp();
    let mut geometric = c(0.0, 0.0);
    let mut power = c(1.0, 0.0);
    for _ in 0..iterations {
        geometric += power;
        power *= step;
    }
    1.0 + f64::from(p.branching()) * geometric
}

/// Closed-form spectral zeta function (zero modes excluded).
pub fn zeta_eval(model: &SpectralModel, s: Complex64) -> Result<Complex64> {
    model.validate()?;
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("zeta argument {s} is not finite")));
    }
    let riemann_pole = |value: Result<Complex64>, at: Complex64, origin: PoleSource| match value {
        Err(Error::Pole { .. }) => Err(Error::AtPole { location: at, origin }),
        other => other,
    };
    match *model {
        SpectralModel::Diamond(p) => diamond_zeta(p, s),
        SpectralModel::FiniteDiamond { params, iterations } => {
            let z = riemann_pole(riemann_zeta(2.0 * s), c(0.5, 0.0), PoleSource::RiemannFactor)?;
            Ok(z * pi_pow(s) * finite_diamond_bracket(params, iterations, s))
        }
        SpectralModel::Interval(_) => riemann_pole(riemann_zeta(2.0 * s), c(0.5, 0.0), PoleSource::RiemannFactor),
        SpectralModel::Sphere { .. } => Err(Error::Unsupported(
            "the sphere zeta function has no closed form here; use zeta_from_trace".into(),
        )),
        SpectralModel::Polynomial { a, b } => {
            riemann_pole(riemann_zeta(b * s - a), c((a + 1.0) / b, 0.0), PoleSource::ToyTower)
        }
        SpectralModel::Exponential { a, b } => {
            // a b^{-s} / (1 - a b^{-s})
            let x = a.ln() - s * b.ln();
            let m = x.im / (2.0 * PI);
            if x.re.abs() < 1e-13 {
                if let Some(m) = near_integer(-m, 1e-10) {
                    return Err(Error::AtPole { location: exponential_pole(a, b, m), origin: PoleSource::ToyTower });
                }
            }
            Ok(x.exp() / -expm1c(x))
        }
    }
}

fn exponential_pole(a: f64, b: f64, m: i64) -> Complex64 {
    c(a.ln() / b.ln(), 2.0 * PI * m as f64 / b.ln())
}

/// Largest real part among the poles: the abscissa of convergence of the eigenvalue sum.
pub fn leading_real_pole(model: &SpectralModel) -> f64 {
    match *model {
        SpectralModel::Exponential { a, b } => a.ln() / b.ln(),
        _ => 0.5 * model.spectral_dimension(),
    }
}

fn leading_residue(model: &SpectralModel) -> Result<f64> {
    Ok(match *model {
        SpectralModel::Diamond(p) => diamond_tower_residue(p, 0)?.re,
        SpectralModel::FiniteDiamond { params, iterations } => {
            (f64::from(params.m()) / f64::from(params.l())).powi(iterations as i32) / (2.0 * PI)
        }
        SpectralModel::Interval(_) => 0.5,
        SpectralModel::Sphere { d } => 1.0 / gamma_real(f64::from(d))?,
        SpectralModel::Polynomial { b, .. } => 1.0 / b,
        SpectralModel::Exponential { b, .. } => 1.0 / b.ln(),
    })
}

/// All poles of the closed-form zeta function inside `strip`, with residues.
pub fn find_poles(model: &SpectralModel, strip: &Strip) -> Result<Vec<ComplexPole>> {
    model.validate()?;
    let mut poles = Vec::new();
    let tower_range = |spacing: f64| -> std::ops::RangeInclusive<i64> {
        (strip.im_min / spacing).ceil() as i64..=(strip.im_max / spacing).floor() as i64
    };
    match *model {
        SpectralModel::Diamond(p) => {
            let re = 0.5 * p.d_h();
            if re >= strip.re_min && re <= strip.re_max {
                for m in tower_range(PI / p.ln_l()) {
                    poles.push(ComplexPole {
                        location: diamond_tower_pole(p, m),
                        residue: diamond_tower_residue(p, m)?,
                        tower_index: m,
                        source: PoleSource::DiamondTower,
                    });
                }
            }
            // zeta_R(2s) pole at 1/2, cancelled by the numerator 1 - l^{1 - 2s}
            let half = c(0.5, 0.0);
            if strip.contains(half) {
                let ln_l = p.ln_l();
                let ratio = f64::from(p.m()) / f64::from(p.l());
                let numerator = ratio * -(1.0 - 2.0 * half.re) * ln_l;
                let denominator = -((p.d_h() - 1.0) * ln_l).exp_m1();
                let residue = 0.5 / PI * numerator / denominator;
                poles.push(ComplexPole { location: half, residue: c(residue + 0.0, 0.0), tower_index: 0, source: PoleSource::RiemannFactor });
            }
        }
        SpectralModel::Exponential { a, b } => {
            let re = a.ln() / b.ln();
            if re >= strip.re_min && re <= strip.re_max {
                for m in tower_range(2.0 * PI / b.ln()) {
                    poles.push(ComplexPole {
                        location: exponential_pole(a, b, m),
                        residue: c(1.0 / b.ln(), 0.0),
                        tower_index: m,
                        source: PoleSource::ToyTower,
                    });
                }
            }
        }
        _ => {
            let location = c(leading_real_pole(model), 0.0);
            if strip.contains(location) {
                let source = match model {
                    SpectralModel::Polynomial { .. } => PoleSource::ToyTower,
                    _ => PoleSource::RiemannFactor,
                };
                poles.push(ComplexPole { location, residue: c(leading_residue(model)?, 0.0), tower_index: 0, source });
            }
        }
    }
    Ok(poles)
}

fn exponential_resonance(a: f64, b: f64) -> Option<u32> {
    let n = -a.ln() / b.ln();
    near_integer(n, 1e-12).filter(|n| *n >= 0).map(|n| n as u32)
}

/// Residue sum of `t^{-s} Gamma(s) zeta(s)`: tower poles with `|m| <= M`,
/// the Gamma pole at `s = 0` and any Gamma poles not cancelled by zeros of zeta.
pub fn trace_from_poles(model: &SpectralModel, t: f64, m_max: u32) -> Result<f64> {
    model.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time argument must be positive, got {t}")));
    }
    let ln_t = t.ln();
    let tower_term = |s: Complex64, residue: Complex64| -> Result<Complex64> {
        Ok(gamma(s)? * residue * (-s * ln_t).exp())
    };
    match *model {
        SpectralModel::Diamond(p) => {
            let mut sum = tower_term(diamond_tower_pole(p, 0), diamond_tower_residue(p, 0)?)?.re;
            for m in 1..=i64::from(m_max) {
                sum += 2.0 * tower_term(diamond_tower_pole(p, m), diamond_tower_residue(p, m)?)?.re;
            }
            // Gamma poles at -n meet zeta_R(-2n) = 0
            Ok(sum + zeta_eval(model, c(0.0, 0.0))?.re)
        }
        SpectralModel::FiniteDiamond { .. } | SpectralModel::Interval(_) => {
            let leading = PI.sqrt() * leading_residue(model)? / t.sqrt();
            let zero_modes = match model {
                SpectralModel::Interval(BoundaryCondition::Neumann) => 1.0,
                _ => 0.0,
            };
            Ok(leading + zeta_eval(model, c(0.0, 0.0))?.re + zero_modes)
        }
        SpectralModel::Sphere { .. } => Err(Error::Unsupported(
            "sphere pole expansion needs the subleading heat coefficients".into(),
        )),
        SpectralModel::Polynomial { a, b } => {
            let p = (a + 1.0) / b;
            let leading = gamma_real(p)? / b * t.powf(-p);
            Ok(leading + polynomial_gamma_terms(a, b, t)?.iter().sum::<f64>())
        }
        SpectralModel::Exponential { a, b } => {
            let residue = c(1.0 / b.ln(), 0.0);
            let mut sum = tower_term(exponential_pole(a, b, 0), residue)?.re;
            for m in 1..=i64::from(m_max) {
                sum += 2.0 * tower_term(exponential_pole(a, b, m), residue)?.re;
            }
            Ok(sum + exponential_gamma_terms(a, b, t)?)
        }
    }
}

/// `sum_{n>=0} (-t)^n / n! * zeta(-n)` for the exponential model, an entire series.
pub fn exponential_gamma_terms(a: f64, b: f64, t: f64) -> Result<f64> {
    if let Some(n) = exponential_resonance(a, b) {
        return Err(Error::Resonance { n });
    }
    let mut sum = 0.0;
    let mut power = 1.0; // (-t)^n / n!
    for n in 0..2000u32 {
        let bn = b.powi(n as i32);
        let zeta = a * bn / (1.0 - a * bn);
        let term = power * zeta;
        sum += term;
        if f64::from(n) > b * t && term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            return Ok(sum);
        }
        power *= -t / f64::from(n + 1);
    }
    Err(Error::Convergence(format!("Gamma-pole series did not converge at t = {t}")))
}

/// Terms `(-t)^n/n! zeta_R(-b n - a)` of the polynomial model's asymptotic
/// series, truncated before the smallest nonzero term starts to grow.
fn polynomial_gamma_terms(a: f64, b: f64, t: f64) -> Result<Vec<f64>> {
    let mut terms = Vec::new();
    let mut power = 1.0;
    let mut last = f64::INFINITY;
    for n in 0..200u32 {
        let z = riemann_zeta(c(-b * f64::from(n) - a, 0.0))?.re;
        let term = power * z;
        if term != 0.0 {
            if term.abs() > last {
                break;
            }
            last = term.abs();
        }
        terms.push(term);
        if term.abs() < 1e-18 && n > 0 {
            break;
        }
        power *= -t / f64::from(n + 1);
    }
    Ok(terms)
}

/// Spectral volume `(4 pi)^{d_s/2} Gamma(d_s/2) L_s^{d_s} Res_{s = d_s/2} zeta`.
pub fn spectral_volume(model: &SpectralModel, l_s: f64) -> Result<f64> {
    model.validate()?;
    if !(l_s > 0.0 && l_s.is_finite()) {
        return Err(Error::Domain(format!("spectral length must be positive, got {l_s}")));
    }
    let half = leading_real_pole(model);
    if half <= 0.0 {
        return Err(Error::Domain(format!("{model} has no pole at positive d_s/2")));
    }
    let residue = leading_residue(model)?;
    if residue.abs() < 1e-300 {
        return Err(Error::ZeroResidue(model.to_string()));
    }
    Ok((4.0 * PI).powf(half) * gamma_real(half)? * l_s.powf(2.0 * half) * residue)
}

/// Small-t cut-off below which the polynomial model's trace is taken from its
/// pole expansion (direct summation there needs more than 1e6 terms).
fn polynomial_cutoff(b: f64) -> f64 {
    50.0 / 1e6f64.powf(b)
}

/// `zeta(s) = (1/Gamma(s)) int_0^inf t^{s-1} K(t) dt`, zero modes removed.
pub fn zeta_from_trace(spec: &SpectrumStream, s: Complex64, tol: f64) -> Result<Complex64> {
    let model = *spec.model();
    let abscissa = leading_real_pole(&model).max(0.0);
    if !(s.re > abscissa) {
        return Err(Error::Convergence(format!(
            "Re s = {} does not exceed the abscissa of convergence {abscissa}",
            s.re
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    let g = gamma(s)?;
    let target = tol * g.norm() * 1e-2;
    let zero_modes = spec.zero_modes();
    let trace_tol = 1e-15;
    let k_nonzero = |t: f64| -> Result<f64> { Ok(heat_trace(spec, t, trace_tol)? - zero_modes) };
    let quad = Tolerance::new(target * 0.1, 1e-14);

    // t in (0, 1] as t = exp(-x)
    let (x_limit, mut small) = match model {
        SpectralModel::Polynomial { a, b } => {
            let t0 = polynomial_cutoff(b);
            (-t0.ln(), polynomial_head(a, b, s, t0)?)
        }
        _ => (f64::INFINITY, c(0.0, 0.0)),
    };
    let decay = s.re - abscissa;
    let panel = (2.0 / decay).clamp(1.0, 8.0);
    let mut x0 = 0.0;
    loop {
        let x1 = (x0 + panel).min(x_limit);
        let r = try_integrate(|x: f64| -> Result<Complex64> { Ok((-s * x).exp() * k_nonzero((-x).exp())?) }, x0, x1, quad)?;
        small += r.value;
        x0 = x1;
        if x0 >= x_limit {
            break;
        }
        let edge = ((-s * x0).exp() * k_nonzero((-x0).exp())?).norm();
        if edge / decay < target * 1e-2 {
            break;
        }
        if x0 > 700.0 {
            return Err(Error::Convergence("small-t Mellin integral did not settle".into()));
        }
    }

    // t in [1, T] plus an exponential tail bound beyond T
    let lambda = spec.lowest_nonzero();
    let mut upper = 2.0_f64;
    loop {
        let k = k_nonzero(upper)?;
        let tail = k * (lambda * upper).exp() * lambda.powf(-s.re) * upper_incomplete_gamma(s.re, lambda * upper);
        if tail < target * 1e-2 {
            break;
        }
        upper *= 2.0;
        if upper > 1e8 {
            return Err(Error::Convergence("large-t Mellin tail did not settle".into()));
        }
    }
    let mut large = c(0.0, 0.0);
    let mut a = 1.0;
    while a < upper {
        let b = (a * 2.0).min(upper);
        // K is only good to ~1e-16 absolute once it has decayed, so cap the ask at that floor
        let floor = 1e-15 * b.powf(s.re);
        let panel_tol = Tolerance::new(quad.abs.max(floor), quad.rel);
        let r = try_integrate(|t: f64| -> Result<Complex64> { Ok((s - 1.0).expf(t) * k_nonzero(t)?) }, a, b, panel_tol)?;
        large += r.value;
        a = b;
    }
    Ok((small + large) / g)
}

/// `int_0^{t0} t^{s-1} K(t) dt` from the pole expansion of the polynomial model.
fn polynomial_head(a: f64, b: f64, s: Complex64, t0: f64) -> Result<Complex64> {
    let p = (a + 1.0) / b;
    let mut sum = gamma_real(p)? / b * (s - p).expf(t0) / (s - p);
    let mut power = 1.0;
    let mut last = f64::INFINITY;
    for n in 0..200u32 {
        let nf = f64::from(n);
        let term_coeff = power * riemann_zeta(c(-b * nf - a, 0.0))?.re;
        if term_coeff != 0.0 {
            let size = (term_coeff * t0.powf(nf)).abs();
            if size > last || size < 1e-300 {
                break;
            }
            last = size;
        }
        sum += term_coeff * (s + nf).expf(t0) / (s + nf);
        power *= -1.0 / (nf + 1.0);
    }
    Ok(sum)
}
