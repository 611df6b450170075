//! Deliberately broken models, used to prove the audits can fail.

use super::{EnergyEstimate, EnergyModel};
use crate::geom::Domain;
use crate::mc::Quality;
use crate::Result;

/// Violates stability by design: `E = -|omega|^2` grows faster than any
/// linear bound in the volume.
#[derive(Debug, Clone, Copy, Default)]
pub struct BrokenStabilityModel;

impl EnergyModel for BrokenStabilityModel {
    fn name(&self) -> String {
        "broken-fixture".into()
    }

    fn kappa(&self) -> f64 {
        1.0
    }

    fn exact_limit(&self) -> Option<f64> {
        None
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn energy(&self, domain: &Domain, quality: Quality) -> Result<EnergyEstimate> {
        if domain.is_empty() {
            return Ok(EnergyEstimate::exact(0.0));
        }
        match domain.volume_hint() {
            Some(v) => Ok(EnergyEstimate::exact(-v * v)),
            None => {
                let est = crate::geom::volume_monte_carlo(domain, quality.samples, quality.seed)?;
                Ok(EnergyEstimate {
                    value: -est.value * est.value,
                    stderr: 2.0 * est.value.abs() * est.stderr,
                    deterministic: false,
                })
            }
        }
    }
}
