//! Energy models: a contract assigning a real (estimated) energy to every
//! bounded domain, three concrete instances, and executable audits of the
//! normalization, stability, averaging, continuity, subaverage and local
//! decomposition assumptions the limit theorems rest on.

pub mod audits;
pub mod fixtures;
pub mod gaussian;
pub mod lattice;
pub mod local;

pub use audits::{AuditReport, AuditRow};
pub use fixtures::BrokenStabilityModel;
pub use gaussian::GaussianFreeEnergyModel;
pub use lattice::LatticePairModel;
pub use local::{Chi, LocalFunctionalModel};

use crate::geom::{vec3, Aabb, Domain, LShape, Vec3};
use crate::mc::Quality;
use crate::tiling::{TileIndex, TilingFrame};
use crate::{Error, Result};

/// An energy value with its sampling uncertainty.
#[derive(Debug, Clone, Copy)]
pub struct EnergyEstimate {
    pub value: f64,
    pub stderr: f64,
    pub deterministic: bool,
}

impl EnergyEstimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            stderr: 0.0,
            deterministic: true,
        }
    }
}

/// Local decomposition of an energy over a set of tiles: per-tile energies,
/// symmetric pair interactions (stored once per unordered pair, full value),
/// and the entropy-defect term.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub tiles: Vec<TileIndex>,
    pub tile_energies: Vec<f64>,
    /// `(i, j, value)` with `i < j` indexing into `tiles`.
    pub pairs: Vec<(usize, usize, f64)>,
    pub s_value: f64,
    /// `sum E + sum_{i<j} I - s`, assembled by the model itself.
    pub assembled_total: f64,
}

impl Decomposition {
    pub fn pair_value(&self, i: usize, j: usize) -> f64 {
        let key = (i.min(j), i.max(j));
        self.pairs
            .iter()
            .find(|&&(a, b, _)| (a, b) == key)
            .map(|&(_, _, v)| v)
            .unwrap_or(0.0)
    }

    /// Ordered-pair interaction sum `sum_{mu != nu} I`.
    pub fn ordered_pair_sum(&self) -> f64 {
        2.0 * self.pairs.iter().map(|&(_, _, v)| v).sum::<f64>()
    }
}

/// The abstract energy contract.
pub trait EnergyModel: Send + Sync {
    fn name(&self) -> String;

    /// Stability constant: `E >= -kappa |omega|` is audited, not assumed.
    fn kappa(&self) -> f64;

    fn exact_limit(&self) -> Option<f64>;

    fn is_deterministic(&self) -> bool;

    fn energy(&self, domain: &Domain, quality: Quality) -> Result<EnergyEstimate>;

    fn decomposable(&self) -> bool {
        false
    }

    fn decompose(
        &self,
        _omega: &Domain,
        _frame: &TilingFrame,
        _tiles: &[TileIndex],
    ) -> Result<Decomposition> {
        Err(Error::NotDecomposable(self.name()))
    }
}

/// Integer lattice sites of `Z^3 + offset` inside a domain, in lexicographic
/// order of the integer coordinates.
pub fn sites_in(domain: &Domain, offset: Vec3) -> Vec<[i64; 3]> {
    if domain.is_empty() {
        return Vec::new();
    }
    let bbox = domain.bbox();
    let mut out = Vec::new();
    let lo = [
        (bbox.lo.x - offset.x).ceil() as i64,
        (bbox.lo.y - offset.y).ceil() as i64,
        (bbox.lo.z - offset.z).ceil() as i64,
    ];
    let hi = [
        (bbox.hi.x - offset.x).floor() as i64,
        (bbox.hi.y - offset.y).floor() as i64,
        (bbox.hi.z - offset.z).floor() as i64,
    ];
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for z in lo[2]..=hi[2] {
                let p = vec3(x as f64, y as f64, z as f64) + offset;
                if domain.contains(p) {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

pub fn site_position(site: [i64; 3], offset: Vec3) -> Vec3 {
    vec3(site[0] as f64, site[1] as f64, site[2] as f64) + offset
}

/// Assign a site to the tile whose closure contains it, resolving boundary
/// ties by the lexicographically smallest `(cell, rot)`.
pub fn assign_site(frame: &TilingFrame, position: Vec3) -> TileIndex {
    let y = frame.to_local(position);
    let h = (1.0 + frame.tau) * 0.5 + 1e-9;
    let lo = [
        (y.x - h).ceil() as i64,
        (y.y - h).ceil() as i64,
        (y.z - h).ceil() as i64,
    ];
    let hi = [
        (y.x + h).floor() as i64,
        (y.y + h).floor() as i64,
        (y.z + h).floor() as i64,
    ];
    let simplex = crate::tiling::reference_simplex();
    for zx in lo[0]..=hi[0] {
        for zy in lo[1]..=hi[1] {
            for zz in lo[2]..=hi[2] {
                let z = vec3(zx as f64, zy as f64, zz as f64);
                for (rot, m) in crate::tiling::octahedral_rotations().iter().enumerate() {
                    let w =
                        crate::tiling::int_rot_apply_transpose(m, y - z) / (1.0 + frame.tau);
                    if simplex.contains(w, 1e-9) {
                        return TileIndex::new([zx, zy, zz], rot as u8);
                    }
                }
            }
        }
    }
    unreachable!("the tiling covers space; no tile found for {position:?}")
}

/// The domain suite used by the stability and translation audits.
pub fn standard_domain_suite() -> Vec<Domain> {
    let mut suite = vec![
        Domain::ball(Vec3::ZERO, 2.0),
        Domain::ball(Vec3::ZERO, 5.0),
        Domain::ball(Vec3::ZERO, 10.0),
        Domain::cube(Vec3::ZERO, 2.0),
        Domain::cube(vec3(0.2, -0.1, 0.3), 6.0),
    ];
    for n in [2.0f64, 4.0] {
        let l = LShape::new(
            Aabb::new(Vec3::ZERO, vec3(2.0 * n, 2.0 * n, 2.0 * n)),
            Aabb::new(vec3(n, n, n), vec3(2.0 * n, 2.0 * n, 2.0 * n)),
        )
        .expect("valid lshape");
        suite.push(Domain::lshape(l));
    }
    suite
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn site_enumeration_counts() {
        let offset = vec3(0.26, 0.13, 0.07);
        let cube = Domain::cuboid(Aabb::new(vec3(-0.5, -0.5, -0.5), vec3(2.5, 2.5, 2.5)));
        assert_eq!(sites_in(&cube, offset).len(), 27);
        let bigger = Domain::cuboid(Aabb::new(Vec3::ZERO, vec3(12.0, 12.0, 12.0)));
        assert_eq!(sites_in(&bigger, offset).len(), 12 * 12 * 12);
    }

    #[test]
    fn site_assignment_unique_and_stable() {
        let frame = TilingFrame::identity(2.0);
        let offset = vec3(0.26, 0.13, 0.07);
        let cube = Domain::cube(Vec3::ZERO, 6.0);
        for site in sites_in(&cube, offset) {
            let p = site_position(site, offset);
            let a = assign_site(&frame, p);
            let b = assign_site(&frame, p);
            assert_eq!(a, b);
            // The assigned tile really contains the site.
            let t = crate::tiling::tile(&frame, a);
            assert!(t.contains(p, 1e-6));
        }
    }
}
