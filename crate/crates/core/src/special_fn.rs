//! Complex Gamma and Riemann zeta functions, and the Jacobi theta-3 factor
//! `sum_{n in Z} exp(-n^2 x)`.
//!
//! Gamma uses a 14-term Lanczos sum (g = 671/128) with reflection for
//! `Re z < 1/2`. Zeta uses Euler-Maclaurin summation for `Re s > 1/2` and the
//! functional equation elsewhere. Both are accurate to a few parts in 1e13 on
//! `|Im| <= 50`, which covers every pole tower this crate touches.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Alias for the complex argument/values used throughout the crate.
pub type ComplexValue = Complex64;

const LANCZOS_SHIFT: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// `B_{2k} / (2k)!` for k = 1..=30.
const BERNOULLI_OVER_FACTORIAL: [f64; 30] = [
    8.333_333_333_333_333_3e-2,
    -1.388_888_888_888_888_9e-3,
    3.306_878_306_878_306_9e-5,
    -8.267_195_767_195_767_2e-7,
    2.087_675_698_786_809_9e-8,
    -5.284_190_138_687_493_2e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_582_9e-13,
    8.586_062_056_277_844_6e-15,
    -2.174_868_698_558_061_9e-16,
    5.509_002_828_360_229_5e-18,
    -1.395_446_468_581_252_3e-19,
    3.534_707_039_629_467_5e-21,
    -8.953_517_427_037_546_9e-23,
    2.267_952_452_337_683_1e-24,
    -5.744_790_668_872_202_4e-26,
    1.455_172_475_614_864_9e-27,
    -3.685_994_940_665_310_2e-29,
    9.336_734_257_095_044_7e-31,
    -2.365_022_415_700_629_9e-32,
    5.990_671_762_482_134_3e-34,
    -1.517_454_884_468_290_3e-35,
    3.843_758_125_454_188_2e-37,
    -9.736_353_072_646_691e-39,
    2.466_247_044_200_681e-40,
    -6.247_076_741_820_743_7e-42,
    1.582_403_024_464_491_4e-43,
    -4.008_273_685_948_936e-45,
    1.015_307_585_556_955_6e-46,
    -2.571_804_158_241_871_7e-48,
];

/// Leading terms summed explicitly before the Euler-Maclaurin correction.
const EULER_MACLAURIN_N: u32 = 25;

fn finite_or_err(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!("{what} is not representable as a finite double")))
    }
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Gamma(z)` for `Re z >= 1/2`, modulo 2 pi i.
fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let shifted = z + LANCZOS_SHIFT;
    let head = (z + 0.5) * shifted.ln() - shifted;
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    let mut y = z;
    for c in LANCZOS_COEFFS {
        y += 1.0;
        ser += c / y;
    }
    head + (SQRT_2PI * ser / z).ln()
}

/// Complex Gamma function.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("gamma argument {z} is not finite")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole { function: "gamma", at: z });
    }
    let value = if z.re < 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        PI / ((PI * z).sin() * lanczos_ln_gamma(one_minus).exp())
    } else {
        lanczos_ln_gamma(z).exp()
    };
    finite_or_err(value, "gamma")
}

/// Real Gamma function; convenience wrapper over [`gamma`].
pub fn gamma_real(x: f64) -> Result<f64> {
    gamma(Complex64::new(x, 0.0)).map(|g| g.re)
}

/// `ln Gamma(z)` for `Re z >= 1/2`, imaginary part modulo 2 pi.
pub(crate) fn ln_gamma_right(z: Complex64) -> Complex64 {
    debug_assert!(z.re >= 0.5);
    lanczos_ln_gamma(z)
}

/// Real `ln Gamma(x)` for `x > 0`.
pub(crate) fn ln_gamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        lanczos_ln_gamma(Complex64::new(x + 1.0, 0.0)).re - x.ln()
    } else {
        lanczos_ln_gamma(Complex64::new(x, 0.0)).re
    }
}

/// Riemann zeta function with analytic continuation to the whole plane.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("zeta argument {s} is not finite")));
    }
    if s.im == 0.0 {
        if s.re == 1.0 {
            return Err(Error::Pole { function: "riemann_zeta", at: s });
        }
        if s.re == 0.0 {
            return Ok(Complex64::new(-0.5, 0.0));
        }
        // trivial zeros
        if s.re < 0.0 && s.re == s.re.round() && (s.re as i64) % 2 == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
    }
    let value = if s.re > 0.5 {
        zeta_euler_maclaurin(s)
    } else {
        zeta_functional_equation(s)?
    };
    finite_or_err(value, "riemann_zeta")
}

fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    let n = f64::from(EULER_MACLAURIN_N);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..EULER_MACLAURIN_N {
        acc += (-s * f64::from(k).ln()).exp();
    }
    let n_pow = (-s * n.ln()).exp();
    acc += n * n_pow / (s - 1.0) + 0.5 * n_pow;

    // Bernoulli tail: B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut rising = s;
    let mut power = n_pow / n;
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coeff * rising * power;
        acc += term;
        if term.norm() <= 1e-17 * acc.norm() {
            break;
        }
        let j = 2.0 * (k as f64 + 1.0);
        rising *= (s + (j - 1.0)) * (s + j);
        power /= n * n;
    }
    acc
}

fn zeta_functional_equation(s: Complex64) -> Result<Complex64> {
    let one_minus = Complex64::new(1.0, 0.0) - s;
    let two_pow = (s * 2f64.ln()).exp();
    let pi_pow = ((s - 1.0) * PI.ln()).exp();
    let sine = (0.5 * PI * s).sin();
    Ok(two_pow * pi_pow * sine * gamma(one_minus)? * zeta_euler_maclaurin(one_minus))
}

/// Direct series `1 + 2 sum_{n>=1} exp(-n^2 x)`; fast for `x >= pi`.
pub fn theta3_direct(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 1.0_f64;
    loop {
        let term = (-n * n * x).exp();
        sum += term;
        if term <= 1e-18 * (1.0 + 2.0 * sum) {
            break;
        }
        n += 1.0;
    }
    1.0 + 2.0 * sum
}

/// Poisson-resummed (modular) series `sqrt(pi/x) * theta3(pi^2/x)`; fast for `x <= pi`.
pub fn theta3_dual(x: f64) -> f64 {
    (PI / x).sqrt() * theta3_direct(PI * PI / x)
}

/// Jacobi theta-3 at zero argument: `sum_{n in Z} exp(-n^2 x)`.
///
/// Switches between the direct and dual series at the self-dual point `x = pi`.
pub fn theta3_factor(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("theta3_factor needs x > 0, got {x}")));
    }
    Ok(if x >= PI { theta3_direct(x) } else { theta3_dual(x) })
}

/// Upper incomplete gamma `Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt` for `a > 0`, `x >= 0`.
pub(crate) fn upper_incomplete_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    let ln_gamma_a = ln_gamma_real(a);
    if x == 0.0 {
        return ln_gamma_a.exp();
    }
    if x < a + 1.0 {
        // series for the regularized lower gamma P(a, x)
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..10_000 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        let p = sum * (-x + a * x.ln() - ln_gamma_a).exp();
        ((1.0 - p).max(0.0)) * ln_gamma_a.exp()
    } else {
        // Lentz continued fraction for Q(a, x) * Gamma(a)
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x + a * x.ln()).exp() * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel_err(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn gamma_closed_forms() {
        assert_relative_eq!(gamma_real(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma_real(5.0).unwrap(), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_real(1.0).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn gamma_modulus_on_the_diamond_tower() {
        // |Gamma(1+iy)|^2 = pi y / sinh(pi y)
        let y = PI / 2f64.ln();
        let oracle = (PI * y / (PI * y).sinh()).sqrt();
        let g = gamma(c(1.0, y)).unwrap().norm();
        assert_relative_eq!(g, oracle, max_relative = 1e-12);
        assert_relative_eq!(g, 4.318_467_322_770_870e-3, max_relative = 1e-12);
    }

    #[test]
    fn gamma_against_high_precision_values() {
        // 40-digit reference values
        let cases = [
            (c(0.3, 7.0), c(2.848_757_995_501_135_1e-5, 7.728_963_574_508_429_7e-7)),
            (c(-2.5, 0.5), c(-0.333_875_203_522_432_34, -0.206_457_307_963_608_41)),
        ];
        for (z, expected) in cases {
            assert!(rel_err(gamma(z).unwrap(), expected) < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn gamma_poles_are_errors() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma(c(n, 0.0)), Err(Error::Pole { .. })));
        }
        assert!(gamma(c(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn zeta_special_values() {
        assert_relative_eq!(riemann_zeta(c(2.0, 0.0)).unwrap().re, PI * PI / 6.0, max_relative = 1e-14);
        assert_eq!(riemann_zeta(c(-2.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_relative_eq!(riemann_zeta(c(0.0, 0.0)).unwrap().re, -0.5);
        assert_relative_eq!(riemann_zeta(c(-1.0, 0.0)).unwrap().re, -1.0 / 12.0, max_relative = 1e-13);
        assert!(matches!(riemann_zeta(c(1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn zeta_against_high_precision_values() {
        let cases = [
            // zeta_R(1 + 2 pi i / ln 3)
            (c(1.0, 2.0 * PI / 3f64.ln()), c(0.839_360_270_403_512_55, 0.246_293_866_269_618_55)),
            (c(0.25, 30.0), c(-0.586_482_788_839_217_95, -0.611_149_631_076_442_81)),
            (c(-3.5, 2.0), c(-3.560_979_964_919_072_3e-3, 4.262_253_731_477_640_7e-2)),
            (c(2.0, 18.0), c(1.356_400_419_412_813_7, -4.227_183_445_028_751e-2)),
        ];
        for (s, expected) in cases {
            let got = riemann_zeta(s).unwrap();
            assert!(rel_err(got, expected) < 1e-12, "s = {s}: {got} vs {expected}");
        }
    }

    #[test]
    fn theta3_values() {
        assert!((theta3_factor(50.0).unwrap() - 1.0).abs() < 1e-12);
        assert_relative_eq!(theta3_factor(PI).unwrap(), 1.086_434_811_213_308, max_relative = 1e-13);
        let x = 0.3;
        let lhs = theta3_factor(x).unwrap();
        let rhs = (PI / x).sqrt() * theta3_factor(PI * PI / x).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
        assert!(theta3_factor(0.0).is_err());
        assert!(theta3_factor(-1.0).is_err());
    }

    #[test]
    fn incomplete_gamma_limits() {
        assert_relative_eq!(upper_incomplete_gamma(1.0, 3.0), (-3.0f64).exp(), max_relative = 1e-13);
        assert_relative_eq!(upper_incomplete_gamma(1.0, 0.5), (-0.5f64).exp(), max_relative = 1e-13);
        // Gamma(1/2, x) = sqrt(pi) erfc(sqrt x); erfc(1) = 0.157299207050285...
        assert_relative_eq!(
            upper_incomplete_gamma(0.5, 1.0),
            PI.sqrt() * 0.157_299_207_050_285_13,
            max_relative = 1e-12
        );
        assert_relative_eq!(upper_incomplete_gamma(2.5, 0.0), gamma_real(2.5).unwrap(), max_relative = 1e-13);
    }
}
