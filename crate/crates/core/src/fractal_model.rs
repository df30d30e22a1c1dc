//! Spectral model descriptors and their fractal dimensions.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A diamond fractal `D_{m,l}`: every link is replaced by `m` sub-links
/// arranged as `m/l` parallel branches of `l` segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DiamondParams {
    m: u32,
    l: u32,
}

impl DiamondParams {
    pub fn new(m: u32, l: u32) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidParams(format!("diamond decimation l = {l} must be >= 2")));
        }
        if m < 4 || m % l != 0 || m / l < 2 {
            return Err(Error::InvalidParams(format!(
                "diamond D_{{{m},{l}}} needs m >= 4, l | m and m/l >= 2"
            )));
        }
        Ok(Self { m, l })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Branching factor `B = m/l - 1 = l^{d_h - 1} - 1`.
    pub fn branching(&self) -> u32 {
        self.m / self.l - 1
    }

    pub fn d_h(&self) -> f64 {
        f64::from(self.m).ln() / f64::from(self.l).ln()
    }

    pub fn ln_l(&self) -> f64 {
        f64::from(self.l).ln()
    }
}

impl fmt::Display for DiamondParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D_{{{},{}}}", self.m, self.l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dimensions {
    pub d_h: f64,
    pub d_w: f64,
    pub d_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
}

pub fn diamond_dimensions(p: DiamondParams) -> Dimensions {
    let d_h = p.d_h();
    Dimensions { d_h, d_w: 2.0, d_s: d_h, l: Some(p.l()) }
}

pub fn generic_dimensions(d_h: f64, d_w: f64) -> Result<Dimensions> {
    if !(d_h > 0.0 && d_w > 0.0 && d_h.is_finite() && d_w.is_finite()) {
        return Err(Error::Domain(format!("dimensions must be positive, got d_h = {d_h}, d_w = {d_w}")));
    }
    Ok(Dimensions { d_h, d_w, d_s: 2.0 * d_h / d_w, l: None })
}

/// Exponent of the Green's function decay `1/rho^{d_h - d_w}`.
pub fn green_exponent(dims: &Dimensions) -> Result<f64> {
    if (dims.d_s - 2.0).abs() < 1e-12 {
        return Err(Error::CriticalDimension { d_s: dims.d_s });
    }
    let e = dims.d_h - dims.d_w;
    debug_assert!((e - dims.d_w * (dims.d_s - 2.0) / 2.0).abs() <= 1e-12 * (1.0 + e.abs()));
    Ok(e)
}

/// Exponent `d_w/(d_w - 1)` of the sub-Gaussian off-diagonal heat kernel bound.
pub fn subgaussian_exponent(dims: &Dimensions) -> Result<f64> {
    if dims.d_w <= 1.0 {
        return Err(Error::Domain(format!("subgaussian exponent needs d_w > 1, got {}", dims.d_w)));
    }
    Ok(dims.d_w / (dims.d_w - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

/// A spectral model with an analytically known spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralModel {
    Diamond(DiamondParams),
    /// Diamond truncated after `iterations` levels of the iterated tower.
    FiniteDiamond { params: DiamondParams, iterations: u32 },
    /// Interval of length pi, eigenvalues `n^2`.
    Interval(BoundaryCondition),
    /// Unit `d`-sphere, eigenvalues `n(n + d - 1)`.
    Sphere { d: u32 },
    /// `sum n^a exp(-n^b t)`.
    Polynomial { a: f64, b: f64 },
    /// `sum a^n exp(-b^n t)`, n >= 1.
    Exponential { a: f64, b: f64 },
}

impl SpectralModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SpectralModel::Diamond(_) | SpectralModel::Interval(_) => Ok(()),
            SpectralModel::FiniteDiamond { iterations, .. } => {
                if iterations == 0 {
                    Err(Error::InvalidParams("finite diamond needs at least one iteration".into()))
                } else {
                    Ok(())
                }
            }
            SpectralModel::Sphere { d } => {
                if d == 0 {
                    Err(Error::Domain("sphere dimension must be >= 1".into()))
                } else {
                    Ok(())
                }
            }
            SpectralModel::Polynomial { a, b } => {
                if !(b > 0.0 && b.is_finite() && a > -1.0 && a.is_finite()) {
                    Err(Error::Domain(format!("polynomial model needs b > 0 and a > -1, got a = {a}, b = {b}")))
                } else {
                    Ok(())
                }
            }
            SpectralModel::Exponential { a, b } => {
                if !(b > 1.0 && b.is_finite() && a > 0.0 && a.is_finite()) {
                    Err(Error::Domain(format!("exponential model needs a > 0 and b > 1, got a = {a}, b = {b}")))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Averaged small-t exponent: `K(t) ~ t^{-d_s/2}`.
    pub fn spectral_dimension(&self) -> f64 {
        match *self {
            SpectralModel::Diamond(p) => p.d_h(),
            SpectralModel::FiniteDiamond { .. } | SpectralModel::Interval(_) => 1.0,
            SpectralModel::Sphere { d } => f64::from(d),
            SpectralModel::Polynomial { a, b } => 2.0 * (a + 1.0) / b,
            SpectralModel::Exponential { a, b } => (2.0 * a.ln() / b.ln()).max(0.0),
        }
    }

    pub fn dimensions(&self) -> Dimensions {
        match *self {
            SpectralModel::Diamond(p) => diamond_dimensions(p),
            _ => {
                let d = self.spectral_dimension();
                Dimensions { d_h: d, d_w: 2.0, d_s: d, l: None }
            }
        }
    }

    /// Angular frequency (per unit `ln t`) of the log-periodic oscillation, if any.
    pub fn log_frequency(&self) -> Option<f64> {
        match *self {
            SpectralModel::Diamond(p) => Some(std::f64::consts::PI / p.ln_l()),
            SpectralModel::Exponential { b, .. } => Some(2.0 * std::f64::consts::PI / b.ln()),
            _ => None,
        }
    }
}

impl fmt::Display for SpectralModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralModel::Diamond(p) => write!(f, "diamond:{},{}", p.m, p.l),
            SpectralModel::FiniteDiamond { params, iterations } => {
                write!(f, "diamond:{},{},{}", params.m, params.l, iterations)
            }
            SpectralModel::Interval(BoundaryCondition::Dirichlet) => write!(f, "interval:dirichlet"),
            SpectralModel::Interval(BoundaryCondition::Neumann) => write!(f, "interval:neumann"),
            SpectralModel::Sphere { d } => write!(f, "sphere:{d}"),
            SpectralModel::Polynomial { a, b } => write!(f, "poly:{a},{b}"),
            SpectralModel::Exponential { a, b } => write!(f, "exp:{a},{b}"),
        }
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse {what} from '{s}'")))
}

impl FromStr for SpectralModel {
    type Err = Error;

    /// `diamond:m,l[,N] | interval:dirichlet|neumann | sphere:d | poly:a,b | exp:a,b`
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("model descriptor '{s}' has no ':'")))?;
        let fields: Vec<&str> = args.split(',').collect();
        let model = match (kind.trim(), fields.as_slice()) {
            ("diamond", [m, l]) => SpectralModel::Diamond(DiamondParams::new(
                parse_num(m, "diamond m")?,
                parse_num(l, "diamond l")?,
            )?),
            ("diamond", [m, l, n]) => SpectralModel::FiniteDiamond {
                params: DiamondParams::new(parse_num(m, "diamond m")?, parse_num(l, "diamond l")?)?,
                iterations: parse_num(n, "iteration count")?,
            },
            ("interval", [bc]) => match bc.trim() {
                "dirichlet" => SpectralModel::Interval(BoundaryCondition::Dirichlet),
                "neumann" => SpectralModel::Interval(BoundaryCondition::Neumann),
                other => return Err(Error::Parse(format!("unknown boundary condition '{other}'"))),
            },
            ("sphere", [d]) => SpectralModel::Sphere { d: parse_num(d, "sphere dimension")? },
            ("poly", [a, b]) => SpectralModel::Polynomial { a: parse_num(a, "a")?, b: parse_num(b, "b")? },
            ("exp", [a, b]) => SpectralModel::Exponential { a: parse_num(a, "a")?, b: parse_num(b, "b")? },
            _ => return Err(Error::Parse(format!("unrecognised model descriptor '{s}'"))),
        };
        model.validate()?;
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn table_of_diamonds() {
        let d42 = diamond_dimensions(DiamondParams::new(4, 2).unwrap());
        assert_eq!((d42.d_h, d42.d_w, d42.d_s, d42.l), (2.0, 2.0, 2.0, Some(2)));
        let d62 = diamond_dimensions(DiamondParams::new(6, 2).unwrap());
        assert_relative_eq!(d62.d_s, 6f64.ln() / 2f64.ln());
        assert!((d62.d_s - 2.58).abs() < 5e-3);
        let d63 = diamond_dimensions(DiamondParams::new(6, 3).unwrap());
        assert!((d63.d_s - 1.63).abs() < 5e-3);
    }

    #[test]
    fn invalid_diamonds() {
        for (m, l) in [(4, 1), (6, 4), (3, 3), (2, 2), (4, 4)] {
            assert!(matches!(DiamondParams::new(m, l), Err(Error::InvalidParams(_))), "{m},{l}");
        }
    }

    #[test]
    fn generic_and_exponents() {
        let ln2 = 2f64.ln();
        let sier = generic_dimensions(3f64.ln() / ln2, 5f64.ln() / ln2).unwrap();
        assert_relative_eq!(sier.d_s, 2.0 * 3f64.ln() / 5f64.ln(), max_relative = 1e-15);
        assert!((sier.d_s - 1.365).abs() < 1e-3);
        assert_relative_eq!(green_exponent(&sier).unwrap(), (0.6f64).ln() / ln2, max_relative = 1e-14);
        assert_eq!(generic_dimensions(2.0, 4.0).unwrap().d_s, 1.0);
        assert_eq!(generic_dimensions(3.0, 2.0).unwrap().d_s, 3.0);
        assert_eq!(green_exponent(&generic_dimensions(3.0, 2.0).unwrap()).unwrap(), 1.0);
        assert!(generic_dimensions(0.0, 2.0).is_err());
        let d42 = diamond_dimensions(DiamondParams::new(4, 2).unwrap());
        assert!(matches!(green_exponent(&d42), Err(Error::CriticalDimension { .. })));
        assert_eq!(subgaussian_exponent(&d42).unwrap(), 2.0);
        assert!(subgaussian_exponent(&generic_dimensions(1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        for s in ["diamond:4,2", "diamond:6,2,5", "interval:dirichlet", "interval:neumann", "sphere:2", "poly:1,2", "exp:2,3"] {
            let m: SpectralModel = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        for bad in ["diamond:4", "diamond:5,2", "interval:robin", "sphere:0", "poly:-2,1", "exp:2,1", "torus:2", "nocolon"] {
            assert!(bad.parse::<SpectralModel>().is_err(), "{bad}");
        }
    }

    proptest! {
        #[test]
        fn green_identity_for_all_diamonds(l in 2u32..8, k in 2u32..8) {
            let p = DiamondParams::new(l * k, l).unwrap();
            let d = diamond_dimensions(p);
            prop_assert!((d.d_w * (d.d_s - 2.0) / 2.0 - (d.d_h - d.d_w)).abs() <= 1e-14);
            prop_assert!((d.d_w - 2.0 * d.d_h / d.d_s).abs() <= 1e-15);
        }

        #[test]
        fn d_h_monotone(l in 2u32..6, k in 2u32..8) {
            let a = DiamondParams::new(l * k, l).unwrap().d_h();
            let b = DiamondParams::new(l * (k + 1), l).unwrap().d_h();
            prop_assert!(b > a);
            // fixed m, larger l (both must divide m)
            let m = l * (l + 1) * k;
            let c = DiamondParams::new(m, l).unwrap().d_h();
            let d = DiamondParams::new(m, l + 1).unwrap().d_h();
            prop_assert!(d < c);
        }
    }
}
