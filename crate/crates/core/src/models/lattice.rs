//! Deterministic lattice pair model: one site per unit cell, a constant
//! self-energy per site, and a truncated screened pair potential.
//!
//! The potential is tabulated on a dyadic grid (26 fractional bits). Every
//! energy is then a sum of exactly representable values whose partial sums
//! stay far below 2^53, so totals are exact in f64 and regrouping the sum by
//! tiles reproduces the same bits.

use super::{
    assign_site, site_position, sites_in, Decomposition, EnergyEstimate, EnergyModel,
};
use crate::geom::{vec3, Domain, Vec3};
use crate::mc::Quality;
use crate::tiling::{TileIndex, TilingFrame};
use crate::Result;
use std::collections::{BTreeMap, HashMap, HashSet};

const QUANT: f64 = (1u64 << 26) as f64;

fn quantize(x: f64) -> f64 {
    (x * QUANT).round() / QUANT
}

#[derive(Debug, Clone)]
pub struct LatticePairModel {
    pub self_energy: f64,
    pub charge_sq: f64,
    pub screening: f64,
    pub r_cut: f64,
    pub offset: Vec3,
    /// Displacements `d` with `0 < |d| <= r_cut` and `d` lexicographically
    /// positive, paired with the quantized potential value; the mirror
    /// displacement carries the same value.
    half_displacements: Vec<([i64; 3], f64)>,
}

impl LatticePairModel {
    pub fn new(self_energy: f64, charge_sq: f64, screening: f64, r_cut: f64) -> Self {
        let offset = vec3(0.26, 0.13, 0.07);
        let reach = r_cut.floor() as i64 + 1;
        let mut half = Vec::new();
        for x in -reach..=reach {
            for y in -reach..=reach {
                for z in -reach..=reach {
                    let d = [x, y, z];
                    if d <= [0, 0, 0] {
                        continue;
                    }
                    let r = ((x * x + y * y + z * z) as f64).sqrt();
                    if r > r_cut {
                        continue;
                    }
                    let v = quantize(charge_sq * (-screening * r).exp() / r);
                    half.push((d, v));
                }
            }
        }
        half.sort_by_key(|&(d, _)| d);
        Self {
            self_energy,
            charge_sq,
            screening,
            r_cut,
            offset,
            half_displacements: half,
        }
    }

    /// Screened-pair defaults: weak coupling, short truncation.
    pub fn standard() -> Self {
        Self::new(-1.0, 0.05, 2.0, 1.5)
    }

    /// Free sites: no pair interaction at all.
    pub fn free_sites() -> Self {
        Self::new(-1.0, 0.0, 2.0, 1.5)
    }

    pub fn sites(&self, domain: &Domain) -> Vec<[i64; 3]> {
        sites_in(domain, self.offset)
    }

    /// Bulk energy per unit volume: self-energy plus half the neighbor sum
    /// (site density is one per unit cell).
    pub fn bulk_energy_per_volume(&self) -> f64 {
        let pair: f64 = self.half_displacements.iter().map(|&(_, v)| v).sum();
        self.self_energy + pair
    }

    fn total_energy(&self, sites: &[[i64; 3]]) -> f64 {
        let set: HashSet<[i64; 3]> = sites.iter().copied().collect();
        let mut e = self.self_energy * sites.len() as f64;
        for s in sites {
            for &(d, v) in &self.half_displacements {
                let n = [s[0] + d[0], s[1] + d[1], s[2] + d[2]];
                if set.contains(&n) {
                    e += v;
                }
            }
        }
        e
    }
}

impl EnergyModel for LatticePairModel {
    fn name(&self) -> String {
        if self.charge_sq == 0.0 {
            "lattice-free".into()
        } else {
            "lattice-pair".into()
        }
    }

    fn kappa(&self) -> f64 {
        // Pairs are nonnegative, so E >= self * N; the suite domains hold at
        // least a cell, where N <= 2 |omega|.
        2.0 * self.self_energy.abs().max(0.5)
    }

    fn exact_limit(&self) -> Option<f64> {
        Some(self.bulk_energy_per_volume())
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn energy(&self, domain: &Domain, _quality: Quality) -> Result<EnergyEstimate> {
        if domain.is_empty() {
            return Ok(EnergyEstimate::exact(0.0));
        }
        Ok(EnergyEstimate::exact(self.total_energy(&self.sites(domain))))
    }

    fn decomposable(&self) -> bool {
        true
    }

    /// Tile energies are intra-tile sums over the sites assigned to each
    /// tile; pair interactions are the cross-tile sums. The entropy term is
    /// identically zero.
    fn decompose(
        &self,
        omega: &Domain,
        frame: &TilingFrame,
        tiles: &[TileIndex],
    ) -> Result<Decomposition> {
        let bucket_of: HashMap<TileIndex, usize> = tiles
            .iter()
            .enumerate()
            .map(|(i, &mu)| (mu, i))
            .collect();
        let sites = self.sites(omega);
        let site_set: HashSet<[i64; 3]> = sites.iter().copied().collect();
        let mut site_bucket: HashMap<[i64; 3], usize> = HashMap::new();
        for &s in &sites {
            let mu = assign_site(frame, site_position(s, self.offset));
            if let Some(&b) = bucket_of.get(&mu) {
                site_bucket.insert(s, b);
            }
        }
        let mut tile_energies = vec![0.0f64; tiles.len()];
        let mut pair_map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &s in &sites {
            let Some(&b1) = site_bucket.get(&s) else {
                continue;
            };
            tile_energies[b1] += self.self_energy;
            for &(d, v) in &self.half_displacements {
                let n = [s[0] + d[0], s[1] + d[1], s[2] + d[2]];
                if !site_set.contains(&n) {
                    continue;
                }
                let Some(&b2) = site_bucket.get(&n) else {
                    continue;
                };
                if b1 == b2 {
                    tile_energies[b1] += v;
                } else {
                    *pair_map.entry((b1.min(b2), b1.max(b2))).or_insert(0.0) += v;
                }
            }
        }
        let pairs: Vec<(usize, usize, f64)> =
            pair_map.into_iter().map(|((i, j), v)| (i, j, v)).collect();
        let assembled_total = tile_energies.iter().sum::<f64>()
            + pairs.iter().map(|&(_, _, v)| v).sum::<f64>();
        Ok(Decomposition {
            tiles: tiles.to_vec(),
            tile_energies,
            pairs,
            s_value: 0.0,
            assembled_total,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Aabb, Vec3};
    use crate::tiling::enumerate_intersecting;

    #[test]
    fn free_sites_count_exactly() {
        let model = LatticePairModel::free_sites();
        let cube = Domain::cuboid(Aabb::new(vec3(-0.5, -0.5, -0.5), vec3(2.5, 2.5, 2.5)));
        let est = model.energy(&cube, Quality::new(1, 1)).unwrap();
        assert_eq!(est.value, -27.0);
        assert_eq!(est.stderr, 0.0);
        assert_eq!(model.bulk_energy_per_volume(), -1.0);
    }

    #[test]
    fn empty_domain_zero() {
        let model = LatticePairModel::standard();
        let est = model.energy(&Domain::empty(), Quality::new(1, 1)).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn pair_table_is_symmetric_and_truncated() {
        let model = LatticePairModel::standard();
        // r_cut = 1.5 keeps |d|^2 in {1, 2}: 3 + 6 lexicographically
        // positive displacements.
        assert_eq!(model.half_displacements.len(), 9);
        for &(d, v) in &model.half_displacements {
            assert!(v >= 0.0);
            let r = ((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) as f64).sqrt();
            assert!(r <= 1.5);
            // Quantized on the dyadic grid.
            assert_eq!(v, quantize(v));
        }
    }

    #[test]
    fn regrouping_is_bit_exact() {
        let model = LatticePairModel::standard();
        let omega = Domain::cube(Vec3::ZERO, 8.0);
        let frame = TilingFrame::identity(4.0);
        let tiles = enumerate_intersecting(&frame, &omega.bbox());
        let decomp = model.decompose(&omega, &frame, &tiles).unwrap();
        let direct = model.energy(&omega, Quality::new(1, 1)).unwrap();
        assert_eq!(
            decomp.assembled_total.to_bits(),
            direct.value.to_bits(),
            "{} vs {}",
            decomp.assembled_total,
            direct.value
        );
        assert!(!decomp.pairs.is_empty(), "cross-tile pairs exist");
    }

    #[test]
    fn partial_tile_set_matches_clipped_energy() {
        let model = LatticePairModel::standard();
        let omega = Domain::cube(Vec3::ZERO, 6.0);
        let frame = TilingFrame::identity(3.0);
        let all = enumerate_intersecting(&frame, &omega.bbox());
        let subset: Vec<TileIndex> = all.iter().copied().take(all.len() / 2).collect();
        let decomp = model.decompose(&omega, &frame, &subset).unwrap();
        let union = crate::tiling::TileUnionSet::new(frame, subset.clone());
        let clipped = Domain::clip(omega.clone(), Domain::tile_union(union));
        let clipped_energy = model.energy(&clipped, Quality::new(1, 1)).unwrap();
        assert_eq!(decomp.assembled_total.to_bits(), clipped_energy.value.to_bits());
    }

    #[test]
    fn interaction_support_zeros() {
        let model = LatticePairModel::standard();
        let omega = Domain::ball(Vec3::ZERO, 3.0);
        let frame = TilingFrame::identity(2.0);
        let mut tiles = enumerate_intersecting(&frame, &omega.bbox());
        let far = TileIndex::new([50, 50, 50], 0);
        tiles.push(far);
        let decomp = model.decompose(&omega, &frame, &tiles).unwrap();
        let far_idx = decomp.tiles.iter().position(|&m| m == far).unwrap();
        assert_eq!(decomp.tile_energies[far_idx], 0.0);
        assert!(decomp
            .pairs
            .iter()
            .all(|&(i, j, _)| i != far_idx && j != far_idx));
    }
}
