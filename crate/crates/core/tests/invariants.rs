//! Property tests for the analytic identities the numerics must respect.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use fracspec::special_fn::{gamma, riemann_zeta, theta3_factor};
use fracspec::spectrum::SpectrumStream;
use fracspec::thermo::log_partition;
use fracspec::traces::{heat_trace, poisson_trace, theta_tail_direct, theta_tail_dual, PoissonMethod};
use fracspec::zeta::{find_poles, leading_real_pole, trace_from_poles, zeta_eval, zeta_from_trace};
use fracspec::{BoundaryCondition, DiamondParams, PoleSource, SpectralModel, Strip};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn stream(model: SpectralModel) -> SpectrumStream {
    SpectrumStream::new(model).unwrap()
}

fn diamond(m: u32, l: u32) -> SpectralModel {
    SpectralModel::Diamond(DiamondParams::new(m, l).unwrap())
}

fn sample_models() -> Vec<SpectralModel> {
    vec![
        SpectralModel::Interval(BoundaryCondition::Dirichlet),
        SpectralModel::Interval(BoundaryCondition::Neumann),
        SpectralModel::Sphere { d: 2 },
        SpectralModel::Sphere { d: 3 },
        diamond(4, 2),
        diamond(6, 3),
        SpectralModel::FiniteDiamond { params: DiamondParams::new(6, 2).unwrap(), iterations: 4 },
        SpectralModel::Polynomial { a: 0.5, b: 1.5 },
        SpectralModel::Exponential { a: 2.0, b: 3.0 },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_reflection(x in 0.001f64..0.999, y in -20.0f64..20.0) {
        let z = c(x, y);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap() * (PI * z).sin() / PI;
        prop_assert!((lhs - 1.0).norm() <= 1e-10, "z = {z}: {lhs}");
    }

    #[test]
    fn zeta_functional_equation(x in -6.0f64..6.0, y in -30.0f64..30.0) {
        let s = c(x, y);
        prop_assume!((s - 1.0).norm() > 1e-3);
        let rhs = (s * 2f64.ln()).exp() * ((s - 1.0) * PI.ln()).exp() * (0.5 * PI * s).sin()
            * gamma(1.0 - s).unwrap() * riemann_zeta(1.0 - s).unwrap();
        let lhs = riemann_zeta(s).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0), "s = {s}: {lhs} vs {rhs}");
    }

    #[test]
    fn theta_modular_identity(lx in (1e-3f64).ln()..(1e3f64).ln()) {
        let x = lx.exp();
        let lhs = theta3_factor(x).unwrap();
        let rhs = (PI / x).sqrt() * theta3_factor(PI * PI / x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs, "x = {x}: {lhs} vs {rhs}");
    }

    #[test]
    fn dual_series_near_switch(u in 0.8f64..1.25) {
        let (d, q) = (theta_tail_direct(u), theta_tail_dual(u));
        // the dual form loses digits to cancellation once the tail is tiny
        prop_assert!((d - q).abs() <= 1e-12 * d + 1e-16);
    }

    #[test]
    fn heat_trace_completely_monotone(which in 0usize..9, l1 in -14.0f64..1.0, gap in 0.01f64..3.0) {
        let spec = stream(sample_models()[which]);
        let (t1, t2) = (l1.exp(), (l1 + gap).exp());
        let (k1, k2) = (heat_trace(&spec, t1, 1e-13).unwrap(), heat_trace(&spec, t2, 1e-13).unwrap());
        prop_assert!(k1 > k2 && k2 > 0.0, "{}: K({t1}) = {k1}, K({t2}) = {k2}", sample_models()[which]);
    }

    #[test]
    fn zero_residue_at_one_half(l in 2u32..9, k in 2u32..9) {
        let model = diamond(k * l, l);
        let strip = Strip::new(0.0, 0.6, -1.0, 1.0).unwrap();
        let half = find_poles(&model, &strip).unwrap().into_iter().find(|p| p.location == c(0.5, 0.0)).unwrap();
        prop_assert!(half.residue.norm() <= 1e-14);
    }

    #[test]
    fn thermo_monotone(which in 0usize..3, r in 5.0f64..150.0, step in 1.01f64..2.0) {
        let spec = stream([
            SpectralModel::Interval(BoundaryCondition::Dirichlet),
            diamond(6, 3),
            SpectralModel::Sphere { d: 2 },
        ][which]);
        // L_s up at fixed T, then T up (beta down) at fixed L_s
        let base = log_partition(&spec, r, 1.0, 1e-10).unwrap().0;
        let wider = log_partition(&spec, r * step, 1.0, 1e-10).unwrap().0;
        let hotter = log_partition(&spec, r, 1.0 / step, 1e-10).unwrap().0;
        prop_assert!(base > 0.0 && wider > base && hotter > base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn log_periodicity_of_normalized_trace(which in 0usize..3, lt in (1e-8f64).ln()..(1e-4f64).ln()) {
        let (m, l) = [(4, 2), (6, 3), (6, 2)][which];
        let model = diamond(m, l);
        let spec = stream(model);
        let d_s = f64::from(m).ln() / f64::from(l).ln();
        let zeta0 = zeta_eval(&model, c(0.0, 0.0)).unwrap().re;
        let r = |t: f64| t.powf(0.5 * d_s) * (heat_trace(&spec, t, 1e-10).unwrap() - zeta0);
        let t = lt.exp();
        let (a, b) = (r(t), r(f64::from(l * l) * t));
        prop_assert!((a - b).abs() <= 1e-6 * a, "{model} t = {t}: {a} vs {b}");
    }

    #[test]
    fn poisson_transform_identity(which in 0usize..4, t in 0.1f64..2.0) {
        let model = [
            SpectralModel::Interval(BoundaryCondition::Dirichlet),
            SpectralModel::Sphere { d: 2 },
            diamond(6, 3),
            SpectralModel::Exponential { a: 2.0, b: 3.0 },
        ][which];
        let spec = stream(model);
        let d = poisson_trace(&spec, t, PoissonMethod::Direct, 1e-13).unwrap();
        let tr = poisson_trace(&spec, t, PoissonMethod::Transform, 1e-12).unwrap();
        prop_assert!((d - tr).abs() <= 2e-10 * d.max(1.0), "{model} t = {t}: {d} vs {tr}");
    }

    #[test]
    fn pole_reconstruction_at_small_t(which in 0usize..2, lt in (1e-9f64).ln()..(1e-5f64).ln()) {
        let model = [diamond(4, 2), diamond(6, 3)][which];
        let t = lt.exp();
        let exact = heat_trace(&stream(model), t, 1e-9).unwrap();
        let poles = trace_from_poles(&model, t, 3).unwrap();
        prop_assert!(((exact - poles) / exact).abs() <= 1e-6);
    }
}

/// Closed form against the Mellin integral of the exact trace, 20 points per model.
fn closed_form_vs_mellin(model: SpectralModel) {
    let abscissa = leading_real_pole(&model).max(0.0);
    let spec = stream(model);
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(20));
    runner
        .run(&(0.5f64..2.5, -4.0f64..4.0), |(dx, y)| {
            let s = c(abscissa + dx, y);
            let closed = zeta_eval(&model, s).unwrap();
            let mellin = zeta_from_trace(&spec, s, 1e-12).unwrap();
            prop_assert!((closed - mellin).norm() <= 1e-8 * closed.norm().max(1.0), "{model} s = {s}: {closed} vs {mellin}");
            Ok(())
        })
        .unwrap();
}

#[test]
fn mellin_matches_closed_form_interval() {
    closed_form_vs_mellin(SpectralModel::Interval(BoundaryCondition::Dirichlet));
    closed_form_vs_mellin(SpectralModel::Interval(BoundaryCondition::Neumann));
}

#[test]
fn mellin_matches_closed_form_diamonds() {
    closed_form_vs_mellin(diamond(4, 2));
    closed_form_vs_mellin(diamond(6, 3));
    closed_form_vs_mellin(SpectralModel::FiniteDiamond { params: DiamondParams::new(6, 2).unwrap(), iterations: 3 });
}

#[test]
fn mellin_matches_closed_form_toys() {
    closed_form_vs_mellin(SpectralModel::Polynomial { a: 0.5, b: 1.5 });
    closed_form_vs_mellin(SpectralModel::Exponential { a: 2.0, b: 3.0 });
}

#[test]
fn tower_spacing_is_exact() {
    for (m, l) in [(4, 2), (6, 2), (6, 3), (8, 2), (12, 4)] {
        let strip = Strip::new(0.0, 3.0, -30.0, 30.0).unwrap();
        let tower: Vec<Complex64> = find_poles(&diamond(m, l), &strip)
            .unwrap()
            .into_iter()
            .filter(|p| p.source == PoleSource::DiamondTower)
            .map(|p| p.location)
            .collect();
        let spacing = 2.0 * PI / (2.0 * f64::from(l).ln());
        assert!(tower.len() >= 3);
        for w in tower.windows(2) {
            let d = w[1] - w[0];
            assert!(d.re == 0.0 && (d.im - spacing).abs() <= 1e-14, "D_{{{m},{l}}}: {d}");
        }
    }
}

#[test]
fn diamond_trace_is_sandwiched() {
    for (m, l) in [(4, 2), (6, 3), (6, 2)] {
        let spec = stream(diamond(m, l));
        let d_s = f64::from(m).ln() / f64::from(l).ln();
        let r: Vec<f64> = fracspec::grid::log_grid(1e-8, 1e-2, 200)
            .into_iter()
            .map(|t| t.powf(0.5 * d_s) * heat_trace(&spec, t, 1e-10).unwrap())
            .collect();
        let (lo, hi) = r.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        // ripple of a few percent plus the zeta(0) drift towards t = 1e-2
        assert!(lo > 0.0 && hi / lo < 1.1, "D_{{{m},{l}}}: [{lo}, {hi}]");
    }
}
