//! Family-by-family summation of spectral kernels with rigorous truncation.
//!
//! Every kernel contributes `deg_j * F_j` per family, and each family value is
//! dominated by an envelope `h(x_j)` satisfying `h(x')/h(x) <= exp(-(x' - x))`
//! for `x' >= x`. If the ratios `g_j exp(-(x_{j+1} - x_j))` (with `g_j` the
//! degeneracy ratio) are non-increasing, the tail after family `j` is at most
//! `U_{j+1} / (1 - rho)` with `U = deg * h(x)` and `rho` the first ratio.
//! All models except the polynomial toy have that structure. For the toy the
//! tail is bounded by an incomplete-gamma integral instead.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fractal_model::SpectralModel;
use crate::special_fn::upper_incomplete_gamma;
use crate::spectrum::{EigenFamily, FamilyKind, SpectrumStream};

pub(crate) const DEFAULT_FAMILY_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Kernel {
    /// `exp(-lambda t)`
    Heat(f64),
    /// `exp(-sqrt(lambda) t)`
    Poisson(f64),
    /// `-ln(1 - exp(-sqrt(lambda) c))`, zero modes skipped.
    Bose(f64),
}

/// Result of a truncated spectral sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summation {
    pub value: f64,
    /// Rigorous bound on the discarded families.
    pub tail_bound: f64,
    pub families: usize,
}

/// `sum_{k>=1} exp(-pi^2 k^2 u)`: direct for `u >= 1`, Poisson-resummed below.
pub fn theta_tail(u: f64) -> f64 {
    if u >= 1.0 {
        theta_tail_direct(u)
    } else {
        theta_tail_dual(u)
    }
}

pub fn theta_tail_direct(u: f64) -> f64 {
    let q = PI * PI * u;
    let mut sum = 0.0;
    let mut k = 1.0_f64;
    loop {
        let term = (-q * k * k).exp();
        sum += term;
        if term <= 1e-17 * sum || term == 0.0 {
            return sum;
        }
        k += 1.0;
    }
}

pub fn theta_tail_dual(u: f64) -> f64 {
    let root = (PI * u).sqrt();
    let mut dual = 0.0;
    let mut n = 1.0_f64;
    loop {
        let term = (-n * n / u).exp();
        dual += term;
        if term <= 1e-17 * (1.0 + dual) {
            break;
        }
        n += 1.0;
    }
    0.5 / root - 0.5 + dual / root
}

/// `sum_{k>=1} -ln(1 - exp(-c k))`, using the Dedekind-eta modular relation
/// `F(c) = pi^2/(6c) + ln(c/2pi)/2 - c/24 + F(4 pi^2/c)` below `c = 2 pi`.
pub fn bose_tower(c: f64) -> f64 {
    let two_pi = 2.0 * PI;
    if c < two_pi {
        let dual = 4.0 * PI * PI / c;
        return PI * PI / (6.0 * c) + 0.5 * (c / two_pi).ln() - c / 24.0 + bose_tower(dual);
    }
    let mut sum = 0.0;
    let mut k = 1.0_f64;
    loop {
        let term = -(-(-c * k).exp()).ln_1p();
        sum += term;
        if term <= 1e-17 * sum || term == 0.0 {
            return sum;
        }
        k += 1.0;
    }
}

struct FamilyTerm {
    value: f64,
    /// Envelope variable; `None` for skipped zero modes.
    x: Option<f64>,
}

fn envelope(kernel: Kernel, harmonic: bool, x: f64) -> f64 {
    match (kernel, harmonic) {
        (Kernel::Heat(_), true) => (-x).exp() / -(-3.0 * x).exp_m1(),
        (Kernel::Poisson(_), true) | (Kernel::Bose(_), false) => 1.0 / x.exp_m1(),
        (Kernel::Bose(_), true) => {
            let d = -(-x).exp_m1();
            (-x).exp() / (d * d)
        }
        (_, false) => (-x).exp(),
    }
}

fn family_term(model: &SpectralModel, kernel: Kernel, fam: &EigenFamily) -> FamilyTerm {
    if fam.harmonic {
        return match kernel {
            Kernel::Heat(t) => {
                let u = fam.scale * t;
                FamilyTerm { value: theta_tail(u), x: Some(PI * PI * u) }
            }
            Kernel::Poisson(t) => {
                let c = PI * fam.scale.sqrt() * t;
                FamilyTerm { value: 1.0 / c.exp_m1(), x: Some(c) }
            }
            Kernel::Bose(r) => {
                let c = PI * fam.scale.sqrt() * r;
                FamilyTerm { value: bose_tower(c), x: Some(c) }
            }
        };
    }
    let lambda = fam.scale;
    // sqrt(n(n + d - 1)) >= n keeps the sphere envelope differences increasing
    let sqrt_majorant = |x: f64, param: f64| match (model, fam.kind) {
        (SpectralModel::Sphere { .. }, FamilyKind::Mode(n)) => n as f64 * param,
        _ => x,
    };
    match kernel {
        Kernel::Heat(t) => {
            let x = lambda * t;
            FamilyTerm { value: (-x).exp(), x: Some(x) }
        }
        Kernel::Poisson(t) => {
            let x = lambda.sqrt() * t;
            FamilyTerm { value: (-x).exp(), x: Some(sqrt_majorant(x, t)) }
        }
        Kernel::Bose(r) => {
            if lambda == 0.0 {
                return FamilyTerm { value: 0.0, x: None };
            }
            let x = lambda.sqrt() * r;
            FamilyTerm { value: -(-(-x).exp()).ln_1p(), x: Some(sqrt_majorant(x, r)) }
        }
    }
}

/// Neumaier-compensated accumulator.
#[derive(Default)]
struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn sum_kernel(spec: &SpectrumStream, kernel: Kernel, tol: f64, cap: usize) -> Result<Summation> {
    if let SpectralModel::Polynomial { a, b } = *spec.model() {
        return sum_polynomial(a, b, kernel, tol, cap);
    }
    let model = *spec.model();
    let mut families = spec.families().peekable();
    let mut acc = Accumulator::default();
    let mut used = 0usize;
    while let Some(fam) = families.next() {
        let term = family_term(&model, kernel, &fam);
        acc.add(fam.degeneracy * term.value);
        used += 1;

        let mut ahead = families.clone();
        let Some(next) = ahead.next() else {
            return Ok(Summation { value: acc.value(), tail_bound: 0.0, families: used });
        };
        let Some(after) = ahead.next() else {
            continue;
        };
        let (tn, ta) = (family_term(&model, kernel, &next), family_term(&model, kernel, &after));
        if let (Some(xn), Some(xa)) = (tn.x, ta.x) {
            let head = next.degeneracy * envelope(kernel, next.harmonic, xn);
            let rho = after.degeneracy / next.degeneracy * (-(xa - xn)).exp();
            if rho < 1.0 {
                let bound = head / (1.0 - rho);
                if bound <= tol {
                    return Ok(Summation { value: acc.value(), tail_bound: bound, families: used });
                }
            }
        }
        if used >= cap {
            return Err(Error::ToleranceUnreachable { tol, cap });
        }
    }
    Ok(Summation { value: acc.value(), tail_bound: 0.0, families: used })
}

/// `sum_{n>=1} n^a K(n^b)` with tail bounded by `int_N^inf n^a exp(-n^{b'} s) dn`.
fn sum_polynomial(a: f64, b: f64, kernel: Kernel, tol: f64, cap: usize) -> Result<Summation> {
    let (power, s, bose) = match kernel {
        Kernel::Heat(t) => (b, t, false),
        Kernel::Poisson(t) => (0.5 * b, t, false),
        Kernel::Bose(r) => (0.5 * b, r, true),
    };
    let mut acc = Accumulator::default();
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let x = nf.powf(power) * s;
        let value = if bose { -(-(-x).exp()).ln_1p() } else { (-x).exp() };
        acc.add(nf.powf(a) * value);

        // n^a exp(-n^p s) decreases for n^p s >= a/p
        if x >= (a / power).max(0.0) {
            let shape = (a + 1.0) / power;
            let integral = upper_incomplete_gamma(shape, x) * s.powf(-shape) / power;
            let factor = if bose { 1.0 / -(-x).exp_m1() } else { 1.0 };
            let bound = integral * factor;
            if bound <= tol {
                return Ok(Summation { value: acc.value(), tail_bound: bound, families: n });
            }
        }
        if n >= cap {
            return Err(Error::ToleranceUnreachable { tol, cap });
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn theta_branches_agree_at_switch() {
        for u in [1.0, 0.5, 2.0, 0.1] {
            let (d, q) = (theta_tail_direct(u), theta_tail_dual(u));
            assert!((d - q).abs() <= 1e-12 * d + 1e-16, "u = {u}: {d} vs {q}");
        }
    }

    #[test]
    fn bose_tower_branches_agree() {
        let two_pi = 2.0 * PI;
        for c in [two_pi, 3.0, 9.0] {
            let mut direct = 0.0;
            for k in 1..2000 {
                direct += -(-(-c * k as f64).exp()).ln_1p();
            }
            assert_relative_eq!(bose_tower(c), direct, max_relative = 1e-13);
        }
        // F(c) -> pi^2/(6c) as c -> 0
        let c = 1e-3;
        assert_relative_eq!(bose_tower(c), PI * PI / (6.0 * c) + 0.5 * (c / two_pi).ln() - c / 24.0, max_relative = 1e-15);
    }

    #[test]
    fn envelope_dominates_family() {
        for x in [0.05, 0.3, 1.0, 4.0] {
            let u = x / (PI * PI);
            assert!(theta_tail(u) <= envelope(Kernel::Heat(0.0), true, x));
            assert!(bose_tower(x) <= envelope(Kernel::Bose(0.0), true, x));
            assert!(-(-(-x).exp()).ln_1p() <= envelope(Kernel::Bose(0.0), false, x));
        }
    }
}
