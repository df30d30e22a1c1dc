//! Eigenvalue enumeration, organised as families sharing a degeneracy law.
//!
//! A *harmonic* family contributes eigenvalues `pi^2 k^2 * scale`, k = 1, 2, ...
//! with the same degeneracy. A *single* family is one eigenvalue. Diamonds
//! and the interval are built from harmonic families; sphere and toy models
//! from singles.

use std::f64::consts::PI;
use std::fmt;

use crate::error::Result;
use crate::fractal_model::{BoundaryCondition, DiamondParams, SpectralModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Base,
    Iterated(u32),
    /// Single eigenvalue with mode number n.
    Mode(u64),
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Base => write!(f, "base"),
            FamilyKind::Iterated(_) => write!(f, "iterated"),
            FamilyKind::Mode(_) => write!(f, "mode"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFamily {
    pub kind: FamilyKind,
    /// Multiplier on `pi^2 k^2` for harmonic families, the eigenvalue itself otherwise.
    pub scale: f64,
    pub degeneracy: f64,
    pub harmonic: bool,
}

impl EigenFamily {
    pub fn index(&self) -> u64 {
        match self.kind {
            FamilyKind::Base => 0,
            FamilyKind::Iterated(n) => u64::from(n),
            FamilyKind::Mode(n) => n,
        }
    }

    /// k-th eigenvalue (k >= 1) of a harmonic family; singles ignore k.
    pub fn eigenvalue(&self, k: u64) -> f64 {
        if self.harmonic {
            let k = k as f64;
            PI * PI * k * k * self.scale
        } else {
            self.scale
        }
    }

    pub fn lowest(&self) -> f64 {
        self.eigenvalue(1)
    }
}

/// Immutable descriptor of a model's spectrum; enumeration is lazy and deterministic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumStream {
    model: SpectralModel,
}

impl SpectrumStream {
    pub fn new(model: SpectralModel) -> Result<Self> {
        model.validate()?;
        Ok(Self { model })
    }

    pub fn model(&self) -> &SpectralModel {
        &self.model
    }

    pub fn families(&self) -> Families {
        Families { model: self.model, next: 0 }
    }

    /// Number of families, or `None` for an infinite stream.
    pub fn family_count(&self) -> Option<u64> {
        match self.model {
            SpectralModel::FiniteDiamond { iterations, .. } => Some(1 + u64::from(iterations)),
            SpectralModel::Interval(BoundaryCondition::Dirichlet) => Some(1),
            SpectralModel::Interval(BoundaryCondition::Neumann) => Some(2),
            _ => None,
        }
    }

    /// Number of zero eigenvalues.
    pub fn zero_modes(&self) -> f64 {
        match self.model {
            SpectralModel::Interval(BoundaryCondition::Neumann) | SpectralModel::Sphere { .. } => 1.0,
            _ => 0.0,
        }
    }

    /// Smallest nonzero eigenvalue.
    pub fn lowest_nonzero(&self) -> f64 {
        match self.model {
            SpectralModel::Diamond(_) | SpectralModel::FiniteDiamond { .. } => PI * PI,
            SpectralModel::Interval(_) | SpectralModel::Polynomial { .. } => 1.0,
            SpectralModel::Sphere { d } => f64::from(d),
            SpectralModel::Exponential { b, .. } => b,
        }
    }

    /// Eigenvalue and degeneracy of mode n for single-index models
    /// (interval, sphere, toys). `None` if n is not a mode of the model.
    pub fn mode(&self, n: u64) -> Option<(f64, f64)> {
        let nf = n as f64;
        match self.model {
            SpectralModel::Interval(bc) => {
                if n == 0 && bc == BoundaryCondition::Dirichlet {
                    None
                } else {
                    Some((nf * nf, 1.0))
                }
            }
            SpectralModel::Sphere { d } => Some((nf * (nf + f64::from(d) - 1.0), sphere_degeneracy(d, n))),
            SpectralModel::Polynomial { a, b } => (n >= 1).then(|| (nf.powf(b), nf.powf(a))),
            SpectralModel::Exponential { a, b } => (n >= 1).then(|| (b.powf(nf), a.powf(nf))),
            _ => None,
        }
    }
}

fn family_at(model: &SpectralModel, i: u64) -> Option<EigenFamily> {
    let diamond_family = |p: &DiamondParams, i: u64| -> EigenFamily {
        if i == 0 {
            EigenFamily { kind: FamilyKind::Base, scale: 1.0, degeneracy: 1.0, harmonic: true }
        } else {
            let n = (i - 1) as u32;
            let l2 = f64::from(p.l() * p.l());
            EigenFamily {
                kind: FamilyKind::Iterated(n),
                scale: l2.powi(n as i32),
                degeneracy: f64::from(p.branching()) * f64::from(p.m()).powi(n as i32),
                harmonic: true,
            }
        }
    };
    match model {
        SpectralModel::Diamond(p) => Some(diamond_family(p, i)),
        SpectralModel::FiniteDiamond { params, iterations } => {
            (i <= u64::from(*iterations)).then(|| diamond_family(params, i))
        }
        SpectralModel::Interval(bc) => {
            let harmonic = EigenFamily { kind: FamilyKind::Base, scale: 1.0 / (PI * PI), degeneracy: 1.0, harmonic: true };
            match (bc, i) {
                (BoundaryCondition::Dirichlet, 0) => Some(harmonic),
                (BoundaryCondition::Neumann, 0) => {
                    Some(EigenFamily { kind: FamilyKind::Mode(0), scale: 0.0, degeneracy: 1.0, harmonic: false })
                }
                (BoundaryCondition::Neumann, 1) => Some(harmonic),
                _ => None,
            }
        }
        SpectralModel::Sphere { .. } => {
            let stream = SpectrumStream { model: *model };
            stream.mode(i).map(|(lambda, deg)| single(i, lambda, deg))
        }
        SpectralModel::Polynomial { .. } | SpectralModel::Exponential { .. } => {
            let stream = SpectrumStream { model: *model };
            stream.mode(i + 1).map(|(lambda, deg)| single(i + 1, lambda, deg))
        }
    }
}

fn single(n: u64, lambda: f64, deg: f64) -> EigenFamily {
    EigenFamily { kind: FamilyKind::Mode(n), scale: lambda, degeneracy: deg, harmonic: false }
}

/// Lazy iterator over the families of a spectrum.
#[derive(Debug, Clone)]
pub struct Families {
    model: SpectralModel,
    next: u64,
}

impl Iterator for Families {
    type Item = EigenFamily;

    fn next(&mut self) -> Option<EigenFamily> {
        let f = family_at(&self.model, self.next)?;
        self.next += 1;
        Some(f)
    }
}

pub fn diamond_spectrum(p: DiamondParams) -> SpectrumStream {
    SpectrumStream { model: SpectralModel::Diamond(p) }
}

pub fn finite_iteration_spectrum(p: DiamondParams, iterations: u32) -> Result<SpectrumStream> {
    SpectrumStream::new(SpectralModel::FiniteDiamond { params: p, iterations })
}

pub fn interval_spectrum(bc: BoundaryCondition) -> SpectrumStream {
    SpectrumStream { model: SpectralModel::Interval(bc) }
}

pub fn sphere_spectrum(d: u32) -> Result<SpectrumStream> {
    SpectrumStream::new(SpectralModel::Sphere { d })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ToyKind {
    Polynomial { a: f64, b: f64 },
    Exponential { a: f64, b: f64 },
}

pub fn toy_spectrum(kind: ToyKind) -> Result<SpectrumStream> {
    SpectrumStream::new(match kind {
        ToyKind::Polynomial { a, b } => SpectralModel::Polynomial { a, b },
        ToyKind::Exponential { a, b } => SpectralModel::Exponential { a, b },
    })
}

/// Exact degeneracy `B m^n` of iterated diamond family n, if it fits in u128.
pub fn diamond_degeneracy(p: DiamondParams, n: u32) -> Option<u128> {
    u128::from(p.m()).checked_pow(n)?.checked_mul(u128::from(p.branching()))
}

/// Total degeneracy of the iterated families n = 0..N-1, as the literal sum.
pub fn finite_tower_degeneracy(p: DiamondParams, iterations: u32) -> Option<u128> {
    (0..iterations).try_fold(0u128, |acc, n| acc.checked_add(diamond_degeneracy(p, n)?))
}

/// `(2n + d - 1)(n + d - 2)! / ((d - 1)! n!)`, with `deg_0 = 1`.
pub fn sphere_degeneracy(d: u32, n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if d == 1 {
        return 2.0;
    }
    // (n + d - 2)! / ((d - 1)! n!) = C(n + d - 2, d - 2) / (d - 1)
    let d = u64::from(d);
    let mut binom = 1.0;
    for j in 1..=(d - 2) {
        binom *= (n + j) as f64 / j as f64;
    }
    (2 * n + d - 1) as f64 * binom / (d - 1) as f64
}

/// Small-t coefficient L of the 1D Weyl term `L/sqrt(4 pi t)` of a finite diamond:
/// `m^N` edges of length `l^{-N}` in units where the base edge has length 1.
pub fn weyl_length(p: DiamondParams, iterations: u32) -> f64 {
    (f64::from(p.m()) / f64::from(p.l())).powi(iterations as i32)
}
