//! Bounded open regions exposed through a membership oracle, a bounding box,
//! optional closed-form volume, and (where the geometry allows it) an exact
//! unsigned distance to the boundary.

use super::lshape::LShape;
use super::polytope::Polytope;
use super::vec::{Aabb, Vec3};
use crate::motion::RigidMotion;
use crate::tiling::TileUnionSet;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub enum Shape {
    Empty,
    Ball { center: Vec3, radius: f64 },
    Box(Aabb),
    ConvexPolytope(Polytope),
    LShape(LShape),
    TileUnion(TileUnionSet),
    /// Image of another domain under `x -> R (scale x) + u`.
    Transformed {
        inner: Box<Domain>,
        motion: RigidMotion,
        inverse: RigidMotion,
        scale: f64,
    },
    /// Intersection of two domains (no closed-form volume or distance).
    Clipped(Box<Domain>, Box<Domain>),
}

#[derive(Debug, Clone)]
pub struct Domain {
    pub shape: Shape,
}

impl Domain {
    pub fn empty() -> Domain {
        Domain { shape: Shape::Empty }
    }

    pub fn ball(center: Vec3, radius: f64) -> Domain {
        Domain {
            shape: Shape::Ball { center, radius },
        }
    }

    pub fn cuboid(b: Aabb) -> Domain {
        Domain { shape: Shape::Box(b) }
    }

    pub fn cube(center: Vec3, side: f64) -> Domain {
        let h = side / 2.0;
        Self::cuboid(Aabb::new(
            center - Vec3 { x: h, y: h, z: h },
            center + Vec3 { x: h, y: h, z: h },
        ))
    }

    pub fn polytope(p: Polytope) -> Domain {
        Domain {
            shape: Shape::ConvexPolytope(p),
        }
    }

    pub fn lshape(l: LShape) -> Domain {
        Domain { shape: Shape::LShape(l) }
    }

    pub fn tile_union(u: TileUnionSet) -> Domain {
        Domain {
            shape: Shape::TileUnion(u),
        }
    }

    pub fn clip(a: Domain, b: Domain) -> Domain {
        Domain {
            shape: Shape::Clipped(Box::new(a), Box::new(b)),
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.shape {
            Shape::Empty => true,
            Shape::Ball { radius, .. } => *radius <= 0.0,
            Shape::Box(b) => b.is_degenerate(),
            Shape::TileUnion(u) => u.is_empty(),
            Shape::Clipped(_, _) => self.bbox().is_degenerate(),
            _ => false,
        }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        match &self.shape {
            Shape::Empty => false,
            Shape::Ball { center, radius } => p.dist(*center) < *radius,
            Shape::Box(b) => {
                (0..3).all(|a| p[a] > b.lo[a] && p[a] < b.hi[a])
            }
            Shape::ConvexPolytope(poly) => poly.contains(p, 0.0),
            Shape::LShape(l) => l.contains(p),
            Shape::TileUnion(u) => u.contains(p),
            Shape::Transformed { inner, inverse, scale, .. } => {
                inner.contains(inverse.apply(p) / *scale)
            }
            Shape::Clipped(a, b) => a.contains(p) && b.contains(p),
        }
    }

    pub fn bbox(&self) -> Aabb {
        match &self.shape {
            Shape::Empty => Aabb::new(Vec3::ZERO, Vec3::ZERO),
            Shape::Ball { center, radius } => {
                let r = Vec3 { x: *radius, y: *radius, z: *radius };
                Aabb::new(*center - r, *center + r)
            }
            Shape::Box(b) => *b,
            Shape::ConvexPolytope(p) => p.bbox(),
            Shape::LShape(l) => l.bbox(),
            Shape::TileUnion(u) => u.bbox(),
            Shape::Transformed { inner, motion, scale, .. } => {
                let inner_box = inner.bbox();
                let corners = inner_box.corners();
                let mapped: Vec<Vec3> = corners.iter().map(|&c| motion.apply(c * *scale)).collect();
                Aabb::from_points(mapped.iter()).unwrap()
            }
            Shape::Clipped(a, b) => a.bbox().intersect(&b.bbox()),
        }
    }

    /// Closed-form volume when one exists.
    pub fn volume_hint(&self) -> Option<f64> {
        match &self.shape {
            Shape::Empty => Some(0.0),
            Shape::Ball { radius, .. } => {
                Some(4.0 / 3.0 * std::f64::consts::PI * radius.powi(3))
            }
            Shape::Box(b) => Some(b.volume()),
            Shape::ConvexPolytope(p) => Some(p.exact_volume),
            Shape::LShape(l) => Some(l.volume()),
            Shape::TileUnion(u) => u.volume_exact(),
            Shape::Transformed { inner, scale, .. } => {
                inner.volume_hint().map(|v| v * scale.powi(3))
            }
            Shape::Clipped(_, _) => None,
        }
    }

    /// Kinds for which the volume operation short-circuits to the closed form.
    pub fn volume_shortcircuit(&self) -> Option<f64> {
        match &self.shape {
            Shape::Empty => Some(0.0),
            Shape::Ball { .. } | Shape::Box(_) | Shape::ConvexPolytope(_) => self.volume_hint(),
            Shape::TileUnion(u) if u.is_disjoint() => u.volume_exact(),
            Shape::Transformed { inner, scale, .. } => {
                inner.volume_shortcircuit().map(|v| v * scale.powi(3))
            }
            _ => None,
        }
    }

    /// Exact unsigned distance to the boundary, when the kind supports it.
    /// For tile unions this is the distance to the nearest member-tile face,
    /// signed by union membership, which undercounts distances deep inside
    /// the union but is exact outside it.
    pub fn boundary_distance(&self, p: Vec3) -> Option<f64> {
        match &self.shape {
            Shape::Empty => None,
            Shape::Ball { center, radius } => Some((p.dist(*center) - radius).abs()),
            Shape::Box(b) => Some(Polytope::axis_box(b).signed_distance(p).abs()),
            Shape::ConvexPolytope(poly) => Some(poly.signed_distance(p).abs()),
            Shape::LShape(l) => Some(l.boundary_distance(p)),
            Shape::TileUnion(u) => Some(u.boundary_distance(p)),
            Shape::Transformed { inner, inverse, scale, .. } => inner
                .boundary_distance(inverse.apply(p) / *scale)
                .map(|d| d * *scale),
            Shape::Clipped(_, _) => None,
        }
    }

    /// Depth of `p` inside the domain (positive inside), for kinds where the
    /// inner margin is exact and concave; used to certify tile containment.
    pub fn inner_depth(&self, p: Vec3) -> Option<f64> {
        match &self.shape {
            Shape::Ball { center, radius } => Some(radius - p.dist(*center)),
            Shape::Box(b) => Some(-Polytope::axis_box(b).signed_distance(p)),
            Shape::ConvexPolytope(poly) => Some(-poly.signed_distance(p)),
            _ => None,
        }
    }

    /// Exact for balls, boxes and polytopes; bounding-box diagonal (a
    /// certified upper bound) otherwise.
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Empty => 0.0,
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::Box(b) => b.diagonal(),
            Shape::ConvexPolytope(p) => p.diameter(),
            Shape::Transformed { inner, scale, .. } => inner.diameter() * *scale,
            _ => self.bbox().diagonal(),
        }
    }

    /// Largest distance from the origin to a point of the domain (an upper
    /// bound for non-polytope kinds), used to size translation supports.
    pub fn circumradius_origin(&self) -> f64 {
        match &self.shape {
            Shape::Empty => 0.0,
            Shape::Ball { center, radius } => center.norm() + radius,
            Shape::ConvexPolytope(p) => p.circumradius(),
            _ => self
                .bbox()
                .corners()
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max),
        }
    }

    pub fn translated(&self, u: Vec3) -> Domain {
        match &self.shape {
            Shape::Empty => Domain::empty(),
            Shape::Ball { center, radius } => Domain::ball(*center + u, *radius),
            Shape::Box(b) => Domain::cuboid(Aabb::new(b.lo + u, b.hi + u)),
            Shape::ConvexPolytope(p) => Domain::polytope(p.translated(u)),
            Shape::LShape(l) => Domain::lshape(l.translated(u)),
            _ => self.transformed(&RigidMotion::translation(u), 1.0),
        }
    }

    /// Image under `x -> R (scale x) + u`. Balls, boxes and polytopes map
    /// natively; other kinds are wrapped with the inverse motion.
    pub fn transformed(&self, g: &RigidMotion, scale: f64) -> Domain {
        assert!(scale > 0.0, "scale must be positive");
        match &self.shape {
            Shape::Empty => Domain::empty(),
            Shape::Ball { center, radius } => {
                Domain::ball(g.apply(*center * scale), radius * scale)
            }
            Shape::Box(b) => Domain::polytope(Polytope::axis_box(b).transformed(g, scale)),
            Shape::ConvexPolytope(p) => Domain::polytope(p.transformed(g, scale)),
            Shape::Transformed { inner, motion, scale: s0, .. } => {
                let combined = g.compose(motion);
                Domain {
                    shape: Shape::Transformed {
                        inner: inner.clone(),
                        inverse: combined.inverse(),
                        motion: combined,
                        scale: s0 * scale,
                    },
                }
            }
            _ => Domain {
                shape: Shape::Transformed {
                    inner: Box::new(self.clone()),
                    motion: *g,
                    inverse: g.inverse(),
                    scale,
                },
            },
        }
    }

    pub fn descriptor(&self) -> String {
        match &self.shape {
            Shape::Empty => "empty".into(),
            Shape::Ball { center, radius } => {
                format!("ball(r={radius},c=({},{},{}))", center.x, center.y, center.z)
            }
            Shape::Box(b) => format!(
                "box([{},{}]x[{},{}]x[{},{}])",
                b.lo.x, b.hi.x, b.lo.y, b.hi.y, b.lo.z, b.hi.z
            ),
            Shape::ConvexPolytope(p) => {
                format!("polytope(v={},vol={:.6})", p.vertices.len(), p.exact_volume)
            }
            Shape::LShape(l) => format!("lshape(vol={})", l.volume()),
            Shape::TileUnion(u) => format!("tile-union(n={},ell={})", u.len(), u.frame().ell),
            Shape::Transformed { inner, scale, .. } => {
                format!("moved({},scale={scale})", inner.descriptor())
            }
            Shape::Clipped(a, b) => format!("clip({},{})", a.descriptor(), b.descriptor()),
        }
    }

    /// The volume invariant check requires a hint; call sites that need a
    /// volume and accept an estimate should use `geom::volume`.
    pub fn require_volume_hint(&self) -> Result<f64> {
        self.volume_hint()
            .ok_or_else(|| Error::Precondition(format!("{} has no closed-form volume", self.descriptor())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec3;

    #[test]
    fn ball_basics() {
        let b = Domain::ball(vec3(1.0, 0.0, 0.0), 2.0);
        assert!(b.contains(vec3(2.5, 0.0, 0.0)));
        assert!(!b.contains(vec3(3.5, 0.0, 0.0)));
        assert_eq!(b.diameter(), 4.0);
        assert!((b.volume_hint().unwrap() - 4.0 / 3.0 * std::f64::consts::PI * 8.0).abs() < 1e-12);
        assert!((b.boundary_distance(vec3(1.0, 0.0, 0.0)).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn membership_false_outside_bbox() {
        let shapes = [
            Domain::ball(vec3(0.5, -0.25, 1.0), 1.5),
            Domain::cube(vec3(0.0, 0.0, 0.0), 2.0),
        ];
        let mut rng = crate::mc::stream_rng(2, crate::mc::StreamKind::Generic, 0);
        for d in &shapes {
            let bbox = d.bbox();
            let wide = bbox.inflate(2.0);
            for _ in 0..10_000 {
                let p = wide.sample(&mut rng);
                if !bbox.contains(p) {
                    assert!(!d.contains(p));
                }
            }
        }
    }

    #[test]
    fn transform_wraps_distance_exactly() {
        let l = LShape::new(
            Aabb::new(vec3(0.0, 0.0, 0.0), vec3(2.0, 2.0, 2.0)),
            Aabb::new(vec3(1.0, 1.0, 1.0), vec3(2.0, 2.0, 2.0)),
        )
        .unwrap();
        let d = Domain::lshape(l);
        let g = RigidMotion::new(
            crate::motion::sample_rotation(77, 0),
            vec3(0.5, -0.3, 0.9),
        );
        let moved = d.transformed(&g, 2.0);
        assert!((moved.volume_hint().unwrap() - 56.0).abs() < 1e-9);
        // Distance scales with the dilation.
        let p_local = vec3(0.5, 0.5, 0.5);
        let p_world = g.apply(p_local * 2.0);
        let inner = d.boundary_distance(p_local).unwrap();
        let outer = moved.boundary_distance(p_world).unwrap();
        assert!((outer - 2.0 * inner).abs() < 1e-9);
        assert!(moved.contains(p_world));
    }

    #[test]
    fn clipped_intersects_memberships() {
        let a = Domain::cube(Vec3::ZERO, 2.0);
        let b = Domain::ball(vec3(1.0, 0.0, 0.0), 1.0);
        let c = Domain::clip(a, b);
        assert!(c.contains(vec3(0.5, 0.0, 0.0)));
        assert!(!c.contains(vec3(-0.5, 0.0, 0.0)));
        assert!(c.volume_hint().is_none());
    }
}
