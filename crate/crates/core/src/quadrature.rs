//! Globally adaptive Gauss-Kronrod (7/15) quadrature for real or complex integrands.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Values the integrator can accumulate.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_segments: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-13, rel: 1e-13, max_segments: 5000 }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, ..Self::default() }
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

fn gk15<T: Integrand, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Segment<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod = kronrod + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).magnitude();
    Segment { a, b, value, error }
}

/// Integrate `f` over `[a, b]` until the error estimate is below
/// `max(tol.abs, tol.rel * |I|)`.
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult<T>>
where
    T: Integrand,
    F: FnMut(f64) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::QuadratureFailure(format!("infinite interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: T::zero(), error: 0.0, evaluations: 0 });
    }
    let mut segments = vec![gk15(&mut f, a, b)];
    let mut evaluations = 15;
    loop {
        let value = segments.iter().fold(T::zero(), |acc, s| acc + s.value);
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !error.is_finite() || !value.magnitude().is_finite() {
            return Err(Error::QuadratureFailure("integrand produced a non-finite value".into()));
        }
        if error <= tol.abs.max(tol.rel * value.magnitude()) {
            return Ok(QuadResult { value, error, evaluations });
        }
        if segments.len() >= tol.max_segments {
            return Err(Error::QuadratureFailure(format!(
                "error estimate {error:e} after {} segments on [{a}, {b}]",
                segments.len()
            )));
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::QuadratureFailure(format!("segment at {} cannot be split further", s.a)));
        }
        segments.push(gk15(&mut f, s.a, mid));
        segments.push(gk15(&mut f, mid, s.b));
        evaluations += 30;
    }
}

/// Like [`integrate`], for integrands that can fail.
pub fn try_integrate<T, F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult<T>>
where
    T: Integrand,
    F: FnMut(f64) -> Result<T>,
{
    let mut failure = None;
    let r = integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        a,
        b,
        tol,
    );
    match failure {
        Some(e) => Err(e),
        None => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x: f64| x.powi(5) - 3.0 * x * x, -1.0, 2.0, Tolerance::default()).unwrap();
        assert!((r.value - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
    }

    #[test]
    fn peaked_and_oscillatory() {
        let r = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tolerance::default()).unwrap();
        let exact = 2.0 * 100.0 * (100.0f64).atan();
        assert!((r.value - exact).abs() / exact < 1e-12);
        let r = integrate(|x: f64| Complex64::new(0.0, 40.0 * x).exp(), 0.0, PI, Tolerance::default()).unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn singular_log() {
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, Tolerance::new(1e-12, 1e-12)).unwrap();
        assert!((r.value + 1.0).abs() < 1e-11);
    }

    #[test]
    fn failures() {
        assert!(integrate(|x: f64| 1.0 / x, 0.0, 1.0, Tolerance::default()).is_err());
        let r: Result<QuadResult<f64>> =
            try_integrate(|x| if x > 0.5 { Err(Error::Domain("x".into())) } else { Ok(x) }, 0.0, 1.0, Tolerance::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
