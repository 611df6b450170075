//! Tiling of space by simplices: the reference simplex is a 24th of the unit
//! cube and the discrete group is the integer lattice extended by the 24 pure
//! rotations of the cube. A tile is addressed by `(cell, rot)` and realized as
//! `motion(ell * (cell + M_rot ((1 + tau) simplex)))`.

use crate::geom::{vec3, Aabb, Domain, EtaClass, Polytope, RegularityReport, Vec3};
use crate::motion::RigidMotion;
use crate::{Error, Result};
use std::collections::HashMap;
use std::sync::OnceLock;

/// Integer rotation matrix (signed permutation with determinant +1).
pub type IntRot = [[i32; 3]; 3];

/// The 24 orientation-preserving symmetries of the cube, in a fixed order.
pub fn octahedral_rotations() -> &'static [IntRot; 24] {
    static ROTS: OnceLock<[IntRot; 24]> = OnceLock::new();
    ROTS.get_or_init(|| {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::with_capacity(24);
        for perm in perms {
            for bits in 0..8u32 {
                let mut m = [[0i32; 3]; 3];
                for (i, &col) in perm.iter().enumerate() {
                    let sign = if bits & (1 << i) != 0 { -1 } else { 1 };
                    m[i][col] = sign;
                }
                if int_det(&m) == 1 {
                    out.push(m);
                }
            }
        }
        out.try_into().expect("exactly 24 rotations")
    })
}

fn int_det(m: &IntRot) -> i32 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn int_rot_apply(m: &IntRot, v: Vec3) -> Vec3 {
    vec3(
        m[0][0] as f64 * v.x + m[0][1] as f64 * v.y + m[0][2] as f64 * v.z,
        m[1][0] as f64 * v.x + m[1][1] as f64 * v.y + m[1][2] as f64 * v.z,
        m[2][0] as f64 * v.x + m[2][1] as f64 * v.y + m[2][2] as f64 * v.z,
    )
}

pub fn int_rot_apply_transpose(m: &IntRot, v: Vec3) -> Vec3 {
    vec3(
        m[0][0] as f64 * v.x + m[1][0] as f64 * v.y + m[2][0] as f64 * v.z,
        m[0][1] as f64 * v.x + m[1][1] as f64 * v.y + m[2][1] as f64 * v.z,
        m[0][2] as f64 * v.x + m[1][2] as f64 * v.y + m[2][2] as f64 * v.z,
    )
}

/// Vertices of the reference simplex: cube center, a face center, and the
/// two corners of one edge of that face. Its orbit under the 24 rotations
/// partitions the unit cube centered at the origin.
pub const SIMPLEX_VERTICES: [Vec3; 4] = [
    vec3(0.0, 0.0, 0.0),
    vec3(0.5, 0.0, 0.0),
    vec3(0.5, 0.5, -0.5),
    vec3(0.5, 0.5, 0.5),
];

/// The reference simplex as a polytope; volume exactly 1/24.
pub fn reference_simplex() -> &'static Polytope {
    static SIMPLEX: OnceLock<Polytope> = OnceLock::new();
    SIMPLEX.get_or_init(|| Polytope::from_simplex(SIMPLEX_VERTICES).expect("valid simplex"))
}

/// Translate so the barycenter sits at the origin; used where experiments
/// need an interior origin (so that shrinking about the origin stays inside).
pub fn recentered(p: &Polytope) -> Polytope {
    p.translated(-p.vertex_centroid())
}

/// Inscribed-sphere radius of the reference simplex (3V over surface area).
pub fn reference_simplex_inradius() -> f64 {
    let s = reference_simplex();
    let mut area = 0.0;
    for loop_ids in &s.faces {
        let v0 = s.vertices[loop_ids[0]];
        for t in 1..loop_ids.len() - 1 {
            let v1 = s.vertices[loop_ids[t]];
            let v2 = s.vertices[loop_ids[t + 1]];
            area += 0.5 * (v1 - v0).cross(v2 - v0).norm();
        }
    }
    3.0 * s.exact_volume / area
}

fn rotated_vertices() -> &'static [[Vec3; 4]; 24] {
    static CACHE: OnceLock<[[Vec3; 4]; 24]> = OnceLock::new();
    CACHE.get_or_init(|| {
        let rots = octahedral_rotations();
        let mut out = [[Vec3::ZERO; 4]; 24];
        for (r, m) in rots.iter().enumerate() {
            for (i, v) in SIMPLEX_VERTICES.iter().enumerate() {
                out[r][i] = int_rot_apply(m, *v);
            }
        }
        out
    })
}

/// Address of one tile: lattice cell and rotation index in `0..24`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct TileIndex {
    pub cell: [i64; 3],
    pub rot: u8,
}

impl TileIndex {
    pub fn new(cell: [i64; 3], rot: u8) -> Self {
        debug_assert!(rot < 24);
        Self { cell, rot }
    }
}

/// Placement of the tiling: a rigid motion, the scale `ell`, and the tile
/// inflation `tau` (tiles overlap for `tau > 0`; at `tau = 0` their interiors
/// are pairwise disjoint).
#[derive(Debug, Clone, Copy)]
pub struct TilingFrame {
    pub motion: RigidMotion,
    pub ell: f64,
    pub tau: f64,
    inverse: RigidMotion,
}

impl TilingFrame {
    pub fn new(motion: RigidMotion, ell: f64, tau: f64) -> Result<Self> {
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::Precondition("ell must be positive".into()));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::Precondition("tau must be >= 0".into()));
        }
        Ok(Self {
            motion,
            ell,
            tau,
            inverse: motion.inverse(),
        })
    }

    pub fn identity(ell: f64) -> Self {
        Self::new(RigidMotion::identity(), ell, 0.0).expect("positive ell")
    }

    pub fn to_local(&self, x: Vec3) -> Vec3 {
        self.inverse.apply(x) / self.ell
    }

    pub fn from_local(&self, y: Vec3) -> Vec3 {
        self.motion.apply(y * self.ell)
    }

    /// Half-width of the cube that encloses one (inflated) tile in local
    /// cell coordinates.
    fn tile_halfwidth(&self) -> f64 {
        (1.0 + self.tau) * 0.5
    }
}

/// World-space vertices of tile `mu` (cheaper than building the polytope).
pub fn tile_vertices(frame: &TilingFrame, mu: TileIndex) -> [Vec3; 4] {
    let base = &rotated_vertices()[mu.rot as usize];
    let z = vec3(mu.cell[0] as f64, mu.cell[1] as f64, mu.cell[2] as f64);
    let s = 1.0 + frame.tau;
    [
        frame.from_local(z + base[0] * s),
        frame.from_local(z + base[1] * s),
        frame.from_local(z + base[2] * s),
        frame.from_local(z + base[3] * s),
    ]
}

/// The tile polytope `motion(ell (cell + M_rot((1+tau) simplex)))`.
pub fn tile(frame: &TilingFrame, mu: TileIndex) -> Polytope {
    Polytope::from_simplex(tile_vertices(frame, mu)).expect("tiles are nondegenerate")
}

fn interval_of_points(axis: Vec3, pts: &[Vec3]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in pts {
        let d = axis.dot(*p);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (lo, hi)
}

fn interval_of_box(axis: Vec3, b: &Aabb) -> (f64, f64) {
    let c = b.center();
    let e = (b.hi - b.lo) * 0.5;
    let m = axis.dot(c);
    let r = e.x * axis.x.abs() + e.y * axis.y.abs() + e.z * axis.z.abs();
    (m - r, m + r)
}

/// Separating-axis overlap test between a tetrahedron and an axis box.
fn tetra_box_overlap(verts: &[Vec3; 4], b: &Aabb, strict: bool) -> bool {
    let mut axes: Vec<Vec3> = Vec::with_capacity(25);
    axes.push(vec3(1.0, 0.0, 0.0));
    axes.push(vec3(0.0, 1.0, 0.0));
    axes.push(vec3(0.0, 0.0, 1.0));
    let face_ids: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
    for ids in face_ids {
        let n = (verts[ids[1]] - verts[ids[0]]).cross(verts[ids[2]] - verts[ids[0]]);
        if n.norm_sq() > 1e-24 {
            axes.push(n);
        }
    }
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for (i, j) in edges {
        let e = verts[j] - verts[i];
        for a in [
            vec3(0.0, e.z, -e.y),
            vec3(-e.z, 0.0, e.x),
            vec3(e.y, -e.x, 0.0),
        ] {
            if a.norm_sq() > 1e-24 {
                axes.push(a);
            }
        }
    }
    for axis in axes {
        let (a_lo, a_hi) = interval_of_points(axis, verts);
        let (b_lo, b_hi) = interval_of_box(axis, b);
        let tol = 1e-9 * axis.norm() * (1.0 + a_hi.abs().max(b_hi.abs()));
        if strict {
            if a_lo >= b_hi - tol || b_lo >= a_hi - tol {
                return false;
            }
        } else if a_lo > b_hi + tol || b_lo > a_hi + tol {
            return false;
        }
    }
    true
}

fn local_cell_range(frame: &TilingFrame, region: &Aabb, extra: f64) -> ([i64; 3], [i64; 3]) {
    let corners = region.corners();
    let mapped: Vec<Vec3> = corners.iter().map(|&c| frame.to_local(c)).collect();
    let lbox = Aabb::from_points(mapped.iter()).unwrap();
    let h = frame.tile_halfwidth() + extra;
    let mut lo = [0i64; 3];
    let mut hi = [0i64; 3];
    for a in 0..3 {
        lo[a] = (lbox.lo[a] - h).ceil() as i64;
        hi[a] = (lbox.hi[a] + h).floor() as i64;
    }
    (lo, hi)
}

fn enumerate_with(frame: &TilingFrame, region: &Aabb, strict: bool) -> Vec<TileIndex> {
    if region.is_degenerate() {
        return Vec::new();
    }
    let (lo, hi) = local_cell_range(frame, region, 0.0);
    let mut out = Vec::new();
    for zx in lo[0]..=hi[0] {
        for zy in lo[1]..=hi[1] {
            for zz in lo[2]..=hi[2] {
                for rot in 0..24u8 {
                    let mu = TileIndex::new([zx, zy, zz], rot);
                    let verts = tile_vertices(frame, mu);
                    if tetra_box_overlap(&verts, region, strict) {
                        out.push(mu);
                    }
                }
            }
        }
    }
    out
}

/// All tiles whose closure meets the box: conservative cell enumeration
/// followed by an exact tetrahedron-box intersection filter. Lexicographic
/// in `(cell, rot)`.
pub fn enumerate_intersecting(frame: &TilingFrame, region: &Aabb) -> Vec<TileIndex> {
    enumerate_with(frame, region, false)
}

/// Tiles whose interior meets the interior of the box.
pub fn enumerate_interior_intersecting(frame: &TilingFrame, region: &Aabb) -> Vec<TileIndex> {
    enumerate_with(frame, region, true)
}

/// A finite set of tiles of one frame, with constant-time point location.
#[derive(Debug, Clone)]
pub struct TileUnionSet {
    frame: TilingFrame,
    kept: Vec<TileIndex>,
    cells: HashMap<[i64; 3], u32>,
    bbox: Aabb,
    span_lo: [i64; 3],
    span_hi: [i64; 3],
}

impl TileUnionSet {
    pub fn new(frame: TilingFrame, mut kept: Vec<TileIndex>) -> Self {
        kept.sort();
        kept.dedup();
        let mut cells: HashMap<[i64; 3], u32> = HashMap::new();
        for mu in &kept {
            *cells.entry(mu.cell).or_insert(0) |= 1u32 << mu.rot;
        }
        let mut bbox = Aabb::new(Vec3::ZERO, Vec3::ZERO);
        let mut span_lo = [i64::MAX; 3];
        let mut span_hi = [i64::MIN; 3];
        let h = frame.tile_halfwidth();
        let mut first = true;
        for cell in cells.keys() {
            for a in 0..3 {
                span_lo[a] = span_lo[a].min(cell[a]);
                span_hi[a] = span_hi[a].max(cell[a]);
            }
            let z = vec3(cell[0] as f64, cell[1] as f64, cell[2] as f64);
            let local = Aabb::new(z - vec3(h, h, h), z + vec3(h, h, h));
            let mapped: Vec<Vec3> = local
                .corners()
                .iter()
                .map(|&c| frame.from_local(c))
                .collect();
            let cell_box = Aabb::from_points(mapped.iter()).unwrap();
            bbox = if first { cell_box } else { bbox.union(&cell_box) };
            first = false;
        }
        if first {
            span_lo = [0; 3];
            span_hi = [0; 3];
        }
        Self {
            frame,
            kept,
            cells,
            bbox,
            span_lo,
            span_hi,
        }
    }

    pub fn frame(&self) -> &TilingFrame {
        &self.frame
    }

    pub fn kept(&self) -> &[TileIndex] {
        &self.kept
    }

    pub fn len(&self) -> usize {
        self.kept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    pub fn bbox(&self) -> Aabb {
        self.bbox
    }

    /// Interiors are pairwise disjoint exactly when tiles are not inflated.
    pub fn is_disjoint(&self) -> bool {
        self.frame.tau == 0.0
    }

    pub fn volume_exact(&self) -> Option<f64> {
        if self.is_disjoint() {
            Some(self.kept.len() as f64 * self.frame.ell.powi(3) / 24.0)
        } else {
            None
        }
    }

    fn local_in_tile(&self, y: Vec3, cell: [i64; 3], rot: u8, tol: f64) -> bool {
        let z = vec3(cell[0] as f64, cell[1] as f64, cell[2] as f64);
        let m = &octahedral_rotations()[rot as usize];
        let w = int_rot_apply_transpose(m, y - z) / (1.0 + self.frame.tau);
        reference_simplex().contains(w, tol)
    }

    pub fn contains(&self, p: Vec3) -> bool {
        let y = self.frame.to_local(p);
        let h = self.frame.tile_halfwidth() + 1e-9;
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
        for zx in lo[0]..=hi[0] {
            for zy in lo[1]..=hi[1] {
                for zz in lo[2]..=hi[2] {
                    if let Some(&mask) = self.cells.get(&[zx, zy, zz]) {
                        for rot in 0..24u8 {
                            if mask & (1 << rot) != 0
                                && self.local_in_tile(y, [zx, zy, zz], rot, 1e-12)
                            {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }

    /// Unsigned distance to the nearest member-tile boundary: expanding ring
    /// search over occupied cells; exact for the min-over-tiles convention.
    pub fn boundary_distance(&self, p: Vec3) -> f64 {
        if self.kept.is_empty() {
            return f64::INFINITY;
        }
        let y = self.frame.to_local(p);
        let h = self.frame.tile_halfwidth();
        let scale = self.frame.ell * (1.0 + self.frame.tau);
        let z0 = [
            y.x.round() as i64,
            y.y.round() as i64,
            y.z.round() as i64,
        ];
        let k_cap = (0..3)
            .map(|a| (z0[a] - self.span_lo[a]).abs().max((z0[a] - self.span_hi[a]).abs()))
            .max()
            .unwrap()
            + 1;
        let mut best = f64::INFINITY;
        for k in 0..=k_cap {
            let ring_lower = self.frame.ell * ((k as f64 - 0.5 - h).max(0.0));
            if ring_lower > best {
                break;
            }
            self.for_ring_cells(z0, k, |cell| {
                if let Some(&mask) = self.cells.get(&cell) {
                    let z = vec3(cell[0] as f64, cell[1] as f64, cell[2] as f64);
                    for rot in 0..24u8 {
                        if mask & (1 << rot) != 0 {
                            let m = &octahedral_rotations()[rot as usize];
                            let w = int_rot_apply_transpose(m, y - z) / (1.0 + self.frame.tau);
                            let d = reference_simplex().signed_distance(w).abs() * scale;
                            if d < best {
                                best = d;
                            }
                        }
                    }
                }
            });
        }
        best
    }

    fn for_ring_cells<F: FnMut([i64; 3])>(&self, z0: [i64; 3], k: i64, mut f: F) {
        if k == 0 {
            f(z0);
            return;
        }
        for &sx in &[-k, k] {
            for dy in -k..=k {
                for dz in -k..=k {
                    f([z0[0] + sx, z0[1] + dy, z0[2] + dz]);
                }
            }
        }
        for &sy in &[-k, k] {
            for dx in (-k + 1)..=(k - 1) {
                for dz in -k..=k {
                    f([z0[0] + dx, z0[1] + sy, z0[2] + dz]);
                }
            }
        }
        for &sz in &[-k, k] {
            for dx in (-k + 1)..=(k - 1) {
                for dy in (-k + 1)..=(k - 1) {
                    f([z0[0] + dx, z0[1] + dy, z0[2] + sz]);
                }
            }
        }
    }
}

/// Guards on the tile scale relative to the domain volume: `ell` must lie in
/// `(ell_min, max_ratio * |omega|^(1/3)]`.
#[derive(Debug, Clone, Copy)]
pub struct InnerApproxGuards {
    pub ell_min: f64,
    pub max_ratio: f64,
}

impl Default for InnerApproxGuards {
    fn default() -> Self {
        Self {
            ell_min: 0.05,
            max_ratio: 0.5,
        }
    }
}

/// Union of tiles kept strictly inside a domain with margin `delta`.
#[derive(Debug, Clone)]
pub struct InnerApprox {
    pub kept: Vec<TileIndex>,
    pub union: Domain,
    pub delta_margin: f64,
    /// True when containment was certified by sampling rather than by an
    /// exact concave-depth bound.
    pub probabilistic: bool,
}

/// Tiles entirely inside `omega` with boundary margin strictly greater than
/// `delta`. Containment is certified through the exact inner depth for balls,
/// boxes and convex polytopes, and through dense vertex/edge sampling (flagged
/// probabilistic) otherwise.
pub fn inner_approximation(
    omega: &Domain,
    frame: &TilingFrame,
    delta: f64,
) -> Result<InnerApprox> {
    inner_approximation_with_guards(omega, frame, delta, InnerApproxGuards::default())
}

/// [`inner_approximation`] with explicit scale guards.
pub fn inner_approximation_with_guards(
    omega: &Domain,
    frame: &TilingFrame,
    delta: f64,
    guards: InnerApproxGuards,
) -> Result<InnerApprox> {
    if !(delta > 0.0) {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    let vol = omega.volume_hint().unwrap_or_else(|| omega.bbox().volume());
    let hi = guards.max_ratio * vol.cbrt();
    if !(frame.ell > guards.ell_min && frame.ell <= hi) {
        return Err(Error::InnerApproxGuards {
            ell: frame.ell,
            lo: guards.ell_min,
            hi,
        });
    }

    let certified = omega.inner_depth(Vec3::ZERO).is_some();
    if !certified && omega.boundary_distance(omega.bbox().center()).is_none() {
        return Err(Error::Precondition(
            "domain supports neither exact depth nor boundary distance".into(),
        ));
    }

    let (lo, hi_cells) = local_cell_range(frame, &omega.bbox(), 0.0);
    // Cell-level prefilter: the depth functions are 1-Lipschitz, so a cell
    // whose center is deeper than delta + cell circumradius keeps all 24
    // tiles, and one shallower than delta - circumradius keeps none.
    let cell_radius = frame.ell * (1.0 + frame.tau) * 3.0f64.sqrt() * 0.5;
    let mut kept = Vec::new();
    for zx in lo[0]..=hi_cells[0] {
        for zy in lo[1]..=hi_cells[1] {
            for zz in lo[2]..=hi_cells[2] {
                let cell = [zx, zy, zz];
                let center = frame.from_local(vec3(zx as f64, zy as f64, zz as f64));
                let depth = if certified {
                    omega.inner_depth(center).unwrap()
                } else if omega.contains(center) {
                    omega.boundary_distance(center).unwrap()
                } else {
                    -omega.boundary_distance(center).unwrap()
                };
                if depth > delta + cell_radius {
                    for rot in 0..24u8 {
                        kept.push(TileIndex::new(cell, rot));
                    }
                    continue;
                }
                if depth < delta - cell_radius {
                    continue;
                }
                for rot in 0..24u8 {
                    let mu = TileIndex::new(cell, rot);
                    let verts = tile_vertices(frame, mu);
                    if certified {
                        if verts
                            .iter()
                            .all(|&v| omega.inner_depth(v).unwrap() > delta)
                        {
                            kept.push(mu);
                        }
                    } else if probe_points(&verts)
                        .iter()
                        .all(|&q| omega.contains(q) && omega.boundary_distance(q).unwrap() > delta)
                    {
                        kept.push(mu);
                    }
                }
            }
        }
    }
    let union_set = TileUnionSet::new(*frame, kept.clone());
    Ok(InnerApprox {
        kept,
        union: Domain::tile_union(union_set),
        delta_margin: delta,
        probabilistic: !certified,
    })
}

fn probe_points(verts: &[Vec3; 4]) -> Vec<Vec3> {
    let mut pts: Vec<Vec3> = verts.to_vec();
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for (i, j) in edges {
        for t in [0.25, 0.5, 0.75] {
            pts.push(verts[i] + (verts[j] - verts[i]) * t);
        }
    }
    pts
}

/// Outcome of the boundary-regularity audit of an inner approximation.
#[derive(Debug, Clone)]
pub struct InnerApproxRegularity {
    pub report: RegularityReport,
    /// Smallest multiplier of the base bound matched by the central sausage
    /// estimates.
    pub m_empirical: f64,
    /// Smallest multiplier that passes the one-sided three-sigma test.
    pub m_passing: f64,
    /// 1 - |union| / |omega|.
    pub deficit_fraction: f64,
    pub probabilistic: bool,
}

/// Audits the union of kept tiles against the inflated bound `m * eta`, and
/// reports the smallest multiplier that the measurements support.
#[allow(clippy::too_many_arguments)]
pub fn regularity_of_inner_approx_audit(
    omega: &Domain,
    eta: &EtaClass,
    frame: &TilingFrame,
    delta: f64,
    m: f64,
    t_grid: &[f64],
    samples: u64,
    seed: u64,
) -> Result<InnerApproxRegularity> {
    let base = crate::geom::eta_regularity_audit(omega, eta, t_grid, samples, seed)?;
    if !base.pass {
        return Err(Error::NotRegular(format!(
            "domain {} fails its own regularity audit",
            omega.descriptor()
        )));
    }
    let approx = inner_approximation(omega, frame, delta)?;
    let scaled = EtaClass::new(m * eta.a, eta.b, eta.c)?;
    let report =
        crate::geom::eta_regularity_audit(&approx.union, &scaled, t_grid, samples, seed)?;
    let union_vol = approx.union.require_volume_hint()?;
    let mut m_empirical = 0.0f64;
    let mut m_passing = 0.0f64;
    for row in &report.rows {
        if row.t == 0.0 {
            continue;
        }
        let base_bound = union_vol * eta.eval(row.t)?;
        m_empirical = m_empirical.max(row.estimate / base_bound);
        m_passing = m_passing.max((row.estimate - 3.0 * row.stderr) / base_bound);
    }
    let omega_vol = omega.require_volume_hint()?;
    Ok(InnerApproxRegularity {
        report,
        m_empirical,
        m_passing: m_passing.max(0.0),
        deficit_fraction: 1.0 - union_vol / omega_vol,
        probabilistic: approx.probabilistic,
    })
}
