//! Bounded convex polytopes as half-space intersections with explicit
//! vertices and ordered faces.

use super::vec::{vec3, Aabb, Vec3};
use crate::motion::RigidMotion;
use crate::{Error, Result, GEOM_TOL};

/// One half-space `normal . x <= offset` with a unit normal.
#[derive(Debug, Clone, Copy)]
pub struct Halfspace {
    pub normal: Vec3,
    pub offset: f64,
}

impl Halfspace {
    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        self.normal.dot(p) <= self.offset + tol
    }

    /// Signed distance of `p` to the bounding plane (positive outside).
    pub fn plane_distance(&self, p: Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Bounded convex solid: half-spaces, vertices, and per-face vertex loops
/// (ordered counterclockwise as seen from outside, aligned with
/// `halfspaces`).
#[derive(Debug, Clone)]
pub struct Polytope {
    pub halfspaces: Vec<Halfspace>,
    pub vertices: Vec<Vec3>,
    pub faces: Vec<Vec<usize>>,
    pub exact_volume: f64,
}

impl Polytope {
    /// Convex hull of a point set. Brute-force plane enumeration; intended
    /// for the small vertex counts used here.
    pub fn from_vertices(points: &[Vec3]) -> Result<Polytope> {
        if points.len() < 4 {
            return Err(Error::DegenerateGeometry(
                "need at least 4 points for a solid hull".into(),
            ));
        }
        let scale = points
            .iter()
            .map(|p| p.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        let tol = GEOM_TOL * scale;

        let mut planes: Vec<Halfspace> = Vec::new();
        let n = points.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let u = points[j] - points[i];
                    let v = points[k] - points[i];
                    let cr = u.cross(v);
                    if cr.norm() <= 1e-12 * scale * scale {
                        continue;
                    }
                    let normal = cr.normalized();
                    let offset = normal.dot(points[i]);
                    let mut above = false;
                    let mut below = false;
                    for p in points {
                        let d = normal.dot(*p) - offset;
                        if d > tol {
                            above = true;
                        } else if d < -tol {
                            below = true;
                        }
                        if above && below {
                            break;
                        }
                    }
                    if above && below {
                        continue;
                    }
                    let hs = if above {
                        Halfspace {
                            normal: -normal,
                            offset: -offset,
                        }
                    } else {
                        Halfspace { normal, offset }
                    };
                    if !planes.iter().any(|q| {
                        (q.normal - hs.normal).norm() < 1e-7 && (q.offset - hs.offset).abs() < tol * 10.0
                    }) {
                        planes.push(hs);
                    }
                }
            }
        }
        if planes.len() < 4 {
            return Err(Error::DegenerateGeometry("hull has fewer than 4 faces".into()));
        }

        // Hull vertices: input points lying on at least one face plane.
        let mut vertices: Vec<Vec3> = Vec::new();
        let mut vert_index = vec![usize::MAX; n];
        for (pi, p) in points.iter().enumerate() {
            if planes.iter().any(|h| h.plane_distance(*p).abs() <= tol * 10.0) {
                vert_index[pi] = vertices.len();
                vertices.push(*p);
            }
        }

        let mut faces = Vec::with_capacity(planes.len());
        for h in &planes {
            let mut loop_ids: Vec<usize> = (0..n)
                .filter(|&pi| vert_index[pi] != usize::MAX)
                .filter(|&pi| h.plane_distance(points[pi]).abs() <= tol * 10.0)
                .map(|pi| vert_index[pi])
                .collect();
            if loop_ids.len() < 3 {
                return Err(Error::DegenerateGeometry("face with fewer than 3 vertices".into()));
            }
            order_face_loop(&vertices, h.normal, &mut loop_ids);
            faces.push(loop_ids);
        }

        let exact_volume = volume_from_faces(&vertices, &faces);
        let poly = Polytope {
            halfspaces: planes,
            vertices,
            faces,
            exact_volume,
        };
        poly.validate()?;
        Ok(poly)
    }

    /// Tetrahedron from four vertices; volume is |det|/6 on the given
    /// coordinates, so dyadic inputs give a bit-exact volume.
    pub fn from_simplex(v: [Vec3; 4]) -> Result<Polytope> {
        let det = (v[1] - v[0]).cross(v[2] - v[0]).dot(v[3] - v[0]);
        if det.abs() < 1e-300 {
            return Err(Error::DegenerateGeometry("flat simplex".into()));
        }
        let exact_volume = det.abs() / 6.0;
        let face_ids: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
        let mut halfspaces = Vec::with_capacity(4);
        let mut faces = Vec::with_capacity(4);
        for (fi, ids) in face_ids.iter().enumerate() {
            let [a, b, c] = *ids;
            let mut normal = (v[b] - v[a]).cross(v[c] - v[a]).normalized();
            let opposite = v[fi];
            if normal.dot(opposite - v[a]) > 0.0 {
                normal = -normal;
            }
            let offset = normal.dot(v[a]);
            let mut loop_ids = vec![a, b, c];
            order_face_loop(&v, normal, &mut loop_ids);
            halfspaces.push(Halfspace { normal, offset });
            faces.push(loop_ids);
        }
        Ok(Polytope {
            halfspaces,
            vertices: v.to_vec(),
            faces,
            exact_volume,
        })
    }

    /// Axis-aligned box as a polytope.
    pub fn axis_box(b: &Aabb) -> Polytope {
        let (l, h) = (b.lo, b.hi);
        let vertices = b.corners().to_vec();
        let halfspaces = vec![
            Halfspace { normal: vec3(1.0, 0.0, 0.0), offset: h.x },
            Halfspace { normal: vec3(-1.0, 0.0, 0.0), offset: -l.x },
            Halfspace { normal: vec3(0.0, 1.0, 0.0), offset: h.y },
            Halfspace { normal: vec3(0.0, -1.0, 0.0), offset: -l.y },
            Halfspace { normal: vec3(0.0, 0.0, 1.0), offset: h.z },
            Halfspace { normal: vec3(0.0, 0.0, -1.0), offset: -l.z },
        ];
        let mut faces = Vec::with_capacity(6);
        for hs in &halfspaces {
            let mut ids: Vec<usize> = (0..8)
                .filter(|&i| hs.plane_distance(vertices[i]).abs() < 1e-12 * (1.0 + vertices[i].norm()))
                .collect();
            order_face_loop(&vertices, hs.normal, &mut ids);
            faces.push(ids);
        }
        Polytope {
            halfspaces,
            vertices,
            faces,
            exact_volume: b.volume(),
        }
    }

    /// Cube of side `side` centered at `center`.
    pub fn cube(center: Vec3, side: f64) -> Polytope {
        let h = side / 2.0;
        Self::axis_box(&Aabb::new(center - vec3(h, h, h), center + vec3(h, h, h)))
    }

    /// Check the structural invariants.
    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::DegenerateGeometry("no vertices".into()));
        }
        let scale = self.circumradius().max(1.0);
        if !scale.is_finite() {
            return Err(Error::DegenerateGeometry("unbounded vertex set".into()));
        }
        for v in &self.vertices {
            for h in &self.halfspaces {
                if h.plane_distance(*v) > GEOM_TOL * scale * 10.0 {
                    return Err(Error::DegenerateGeometry(format!(
                        "vertex {v:?} violates a half-space by {}",
                        h.plane_distance(*v)
                    )));
                }
            }
        }
        let hull_vol = volume_from_faces(&self.vertices, &self.faces);
        let rel = (self.exact_volume - hull_vol).abs() / hull_vol.abs().max(1e-300);
        if rel > 1e-9 {
            return Err(Error::DegenerateGeometry(format!(
                "stored volume {} disagrees with hull volume {}",
                self.exact_volume, hull_vol
            )));
        }
        Ok(())
    }

    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.contains(p, tol))
    }

    /// Negative inside, positive outside, zero on the boundary. Outside
    /// values are exact distances to the solid (projection onto faces,
    /// edges or vertices).
    pub fn signed_distance(&self, p: Vec3) -> f64 {
        let inside_margin = self
            .halfspaces
            .iter()
            .map(|h| h.plane_distance(p))
            .fold(f64::NEG_INFINITY, f64::max);
        if inside_margin <= 0.0 {
            return inside_margin;
        }
        let mut best = f64::INFINITY;
        for (fi, h) in self.halfspaces.iter().enumerate() {
            let d = h.plane_distance(p);
            if d > 0.0 && self.projection_in_face(p, fi) {
                best = best.min(d);
            }
        }
        for loop_ids in &self.faces {
            let m = loop_ids.len();
            for e in 0..m {
                let a = self.vertices[loop_ids[e]];
                let b = self.vertices[loop_ids[(e + 1) % m]];
                best = best.min(segment_distance(p, a, b));
            }
        }
        best
    }

    fn projection_in_face(&self, p: Vec3, face: usize) -> bool {
        let h = &self.halfspaces[face];
        let q = p - h.normal * h.plane_distance(p);
        let ids = &self.faces[face];
        let m = ids.len();
        for e in 0..m {
            let a = self.vertices[ids[e]];
            let b = self.vertices[ids[(e + 1) % m]];
            if (b - a).cross(q - a).dot(h.normal) < 0.0 {
                return false;
            }
        }
        true
    }

    /// Image under `x -> R (scale x) + u`.
    pub fn transformed(&self, g: &RigidMotion, scale: f64) -> Polytope {
        let vertices: Vec<Vec3> = self
            .vertices
            .iter()
            .map(|&v| g.apply(v * scale))
            .collect();
        let halfspaces: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .map(|h| {
                let normal = g.rot.apply(h.normal);
                Halfspace {
                    normal,
                    offset: scale * h.offset + normal.dot(g.trans),
                }
            })
            .collect();
        Polytope {
            halfspaces,
            vertices,
            faces: self.faces.clone(),
            exact_volume: self.exact_volume * scale.powi(3),
        }
    }

    pub fn translated(&self, u: Vec3) -> Polytope {
        Polytope {
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace {
                    normal: h.normal,
                    offset: h.offset + h.normal.dot(u),
                })
                .collect(),
            vertices: self.vertices.iter().map(|&v| v + u).collect(),
            faces: self.faces.clone(),
            exact_volume: self.exact_volume,
        }
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::from_points(self.vertices.iter()).expect("polytope has vertices")
    }

    /// Largest vertex norm: radius of the circumscribed ball about the origin.
    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Radius of the largest origin-centered ball inside the solid; only
    /// meaningful when the origin is interior (all offsets positive).
    pub fn inscribed_radius_origin(&self) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| h.offset)
            .fold(f64::INFINITY, f64::min)
    }

    /// Vertex average; a strictly interior point for a solid hull.
    pub fn vertex_centroid(&self) -> Vec3 {
        let mut c = Vec3::ZERO;
        for &v in &self.vertices {
            c = c + v;
        }
        c / self.vertices.len() as f64
    }

    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                best = best.max(self.vertices[i].dist(self.vertices[j]));
            }
        }
        best
    }
}

fn order_face_loop(vertices: &[Vec3], normal: Vec3, ids: &mut [usize]) {
    let centroid = ids
        .iter()
        .fold(Vec3::ZERO, |acc, &i| acc + vertices[i])
        / ids.len() as f64;
    let e1 = normal.any_orthogonal();
    let e2 = normal.cross(e1);
    ids.sort_by(|&a, &b| {
        let pa = vertices[a] - centroid;
        let pb = vertices[b] - centroid;
        let aa = pa.dot(e2).atan2(pa.dot(e1));
        let ab = pb.dot(e2).atan2(pb.dot(e1));
        aa.partial_cmp(&ab).unwrap()
    });
}

/// Volume by the divergence theorem over outward-ordered face loops.
fn volume_from_faces(vertices: &[Vec3], faces: &[Vec<usize>]) -> f64 {
    let mut six_v = 0.0;
    for loop_ids in faces {
        let v0 = vertices[loop_ids[0]];
        for t in 1..loop_ids.len() - 1 {
            let v1 = vertices[loop_ids[t]];
            let v2 = vertices[loop_ids[t + 1]];
            six_v += v0.cross(v1).dot(v2);
        }
    }
    six_v.abs() / 6.0
}

fn segment_distance(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube() -> Polytope {
        Polytope::cube(Vec3::ZERO, 1.0)
    }

    #[test]
    fn cube_volume_and_membership() {
        let c = unit_cube();
        assert_eq!(c.exact_volume, 1.0);
        assert!(c.contains(vec3(0.49, -0.49, 0.0), 0.0));
        assert!(!c.contains(vec3(0.51, 0.0, 0.0), 0.0));
        c.validate().unwrap();
    }

    #[test]
    fn cube_signed_distance_matches_closed_forms() {
        let c = unit_cube();
        assert!((c.signed_distance(Vec3::ZERO) - (-0.5)).abs() < 1e-12);
        assert!((c.signed_distance(vec3(1.0, 0.0, 0.0)) - 0.5).abs() < 1e-12);
        let corner = c.signed_distance(vec3(1.0, 1.0, 1.0));
        assert!((corner - (3.0f64.sqrt() * 0.5)).abs() < 1e-12);
        // Edge projection.
        let edge = c.signed_distance(vec3(1.0, 1.0, 0.0));
        assert!((edge - (2.0f64.sqrt() * 0.5)).abs() < 1e-12);
    }

    #[test]
    fn hull_of_cube_corners_reconstructs_cube() {
        let pts = Aabb::new(vec3(-0.5, -0.5, -0.5), vec3(0.5, 0.5, 0.5)).corners();
        let hull = Polytope::from_vertices(&pts).unwrap();
        assert_eq!(hull.halfspaces.len(), 6);
        assert_eq!(hull.vertices.len(), 8);
        assert!((hull.exact_volume - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hull_drops_interior_points() {
        let mut pts = Aabb::new(vec3(-0.5, -0.5, -0.5), vec3(0.5, 0.5, 0.5))
            .corners()
            .to_vec();
        pts.push(Vec3::ZERO);
        let hull = Polytope::from_vertices(&pts).unwrap();
        assert_eq!(hull.vertices.len(), 8);
    }

    #[test]
    fn simplex_volume_is_det_over_six() {
        let s = Polytope::from_simplex([
            Vec3::ZERO,
            vec3(1.0, 0.0, 0.0),
            vec3(0.0, 1.0, 0.0),
            vec3(0.0, 0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(s.exact_volume, 1.0 / 6.0);
        s.validate().unwrap();
        assert!(s.contains(vec3(0.2, 0.2, 0.2), 0.0));
        assert!(!s.contains(vec3(0.5, 0.5, 0.5), 0.0));
    }

    #[test]
    fn signed_distance_is_lipschitz_on_random_pairs() {
        let s = Polytope::from_simplex([
            Vec3::ZERO,
            vec3(1.0, 0.0, 0.0),
            vec3(0.0, 1.0, 0.0),
            vec3(0.0, 0.0, 1.0),
        ])
        .unwrap();
        let mut rng = crate::mc::stream_rng(11, crate::mc::StreamKind::Generic, 0);
        let cell = Aabb::new(vec3(-1.5, -1.5, -1.5), vec3(2.5, 2.5, 2.5));
        for _ in 0..10_000 {
            let a = cell.sample(&mut rng);
            let b = cell.sample(&mut rng);
            let da = s.signed_distance(a);
            let db = s.signed_distance(b);
            assert!((da - db).abs() <= a.dist(b) + 1e-9);
        }
    }
}
