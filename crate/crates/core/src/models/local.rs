//! Local functional energies `E(omega) = integral over omega of chi`, with a
//! bounded lattice-periodic density `chi`.

use super::{EnergyEstimate, EnergyModel};
use crate::geom::{Domain, Vec3};
use crate::mc::{self, Quality, StreamKind};
use crate::Result;

/// Periodic bounded densities with a known cell average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Chi {
    Const(f64),
    /// `sin^2(2 pi x)` in the first coordinate; cell average 1/2.
    SinSqX,
}

impl Chi {
    pub fn eval(&self, p: Vec3) -> f64 {
        match self {
            Chi::Const(c) => *c,
            Chi::SinSqX => {
                let s = (2.0 * std::f64::consts::PI * p.x).sin();
                s * s
            }
        }
    }

    pub fn sup_abs(&self) -> f64 {
        match self {
            Chi::Const(c) => c.abs(),
            Chi::SinSqX => 1.0,
        }
    }

    pub fn cell_average(&self) -> f64 {
        match self {
            Chi::Const(c) => *c,
            Chi::SinSqX => 0.5,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Chi::Const(c) => format!("const({c})"),
            Chi::SinSqX => "sin2x".into(),
        }
    }
}

/// Monte Carlo integral of `chi` over the domain.
#[derive(Debug, Clone, Copy)]
pub struct LocalFunctionalModel {
    pub chi: Chi,
}

impl LocalFunctionalModel {
    pub fn new(chi: Chi) -> Self {
        Self { chi }
    }

    /// The volume functional.
    pub fn volume_functional() -> Self {
        Self::new(Chi::Const(1.0))
    }
}

impl EnergyModel for LocalFunctionalModel {
    fn name(&self) -> String {
        format!("local-{}", self.chi.describe())
    }

    fn kappa(&self) -> f64 {
        self.chi.sup_abs()
    }

    fn exact_limit(&self) -> Option<f64> {
        Some(self.chi.cell_average())
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn energy(&self, domain: &Domain, quality: Quality) -> Result<EnergyEstimate> {
        if domain.is_empty() {
            return Ok(EnergyEstimate::exact(0.0));
        }
        let bbox = domain.bbox();
        if bbox.is_degenerate() {
            return Ok(EnergyEstimate::exact(0.0));
        }
        let chi = self.chi;
        let acc = mc::mc_mean(quality.samples, quality.seed, StreamKind::Energy, |rng| {
            let p = bbox.sample(rng);
            if domain.contains(p) {
                chi.eval(p)
            } else {
                0.0
            }
        });
        Ok(EnergyEstimate {
            value: bbox.volume() * acc.mean(),
            stderr: bbox.volume() * acc.stderr(),
            deterministic: false,
        })
    }
}
