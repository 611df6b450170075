//! Box-minus-box domains with an exact boundary decomposition.
//!
//! The boundary of `outer \ cut` is a union of axis-aligned rectangles:
//! the outer faces with the cut's cross-section removed, plus the cut faces
//! that lie strictly inside the outer box. Distances to the boundary are the
//! minimum of point-rectangle distances, which keeps sausage-volume audits
//! exact for these non-convex shapes.

use super::vec::{Aabb, Vec3};
use crate::{Error, Result};

/// Flat axis-aligned rectangle: `plane` on `axis`, spanning `[lo, hi]` on the
/// two remaining axes (in increasing axis order).
#[derive(Debug, Clone, Copy)]
struct AxisRect {
    axis: usize,
    plane: f64,
    lo: [f64; 2],
    hi: [f64; 2],
}

impl AxisRect {
    fn distance(&self, p: Vec3) -> f64 {
        let (a1, a2) = other_axes(self.axis);
        let dp = p[self.axis] - self.plane;
        let q = [p[a1], p[a2]];
        let mut d2 = dp * dp;
        for k in 0..2 {
            let d = (self.lo[k] - q[k]).max(0.0).max(q[k] - self.hi[k]);
            d2 += d * d;
        }
        d2.sqrt()
    }

    fn area(&self) -> f64 {
        (self.hi[0] - self.lo[0]).max(0.0) * (self.hi[1] - self.lo[1]).max(0.0)
    }
}

fn other_axes(axis: usize) -> (usize, usize) {
    match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// 2D rectangle subtraction, as up to four pieces of `r \ s`.
fn rect_subtract(r: ([f64; 2], [f64; 2]), s: ([f64; 2], [f64; 2])) -> Vec<([f64; 2], [f64; 2])> {
    let ilo = [r.0[0].max(s.0[0]), r.0[1].max(s.0[1])];
    let ihi = [r.1[0].min(s.1[0]), r.1[1].min(s.1[1])];
    if ilo[0] >= ihi[0] || ilo[1] >= ihi[1] {
        return vec![r];
    }
    let mut out = Vec::new();
    if r.0[0] < ilo[0] {
        out.push(([r.0[0], r.0[1]], [ilo[0], r.1[1]]));
    }
    if ihi[0] < r.1[0] {
        out.push(([ihi[0], r.0[1]], [r.1[0], r.1[1]]));
    }
    if r.0[1] < ilo[1] {
        out.push(([ilo[0], r.0[1]], [ihi[0], ilo[1]]));
    }
    if ihi[1] < r.1[1] {
        out.push(([ilo[0], ihi[1]], [ihi[0], r.1[1]]));
    }
    out
}

/// Open region `interior(outer) \ closure(cut)`.
#[derive(Debug, Clone)]
pub struct LShape {
    pub outer: Aabb,
    pub cut: Aabb,
    boundary: Vec<AxisRect>,
    volume: f64,
}

impl LShape {
    pub fn new(outer: Aabb, cut: Aabb) -> Result<LShape> {
        if outer.is_degenerate() {
            return Err(Error::DegenerateGeometry("outer box degenerate".into()));
        }
        let removed = outer.intersect(&cut).volume();
        let volume = outer.volume() - removed;
        if volume <= 0.0 {
            return Err(Error::DegenerateGeometry("cut removes the whole box".into()));
        }
        let mut boundary = Vec::new();
        for axis in 0..3 {
            let (a1, a2) = other_axes(axis);
            let outer2d = ([outer.lo[a1], outer.lo[a2]], [outer.hi[a1], outer.hi[a2]]);
            let cut2d = ([cut.lo[a1], cut.lo[a2]], [cut.hi[a1], cut.hi[a2]]);
            for plane in [outer.lo[axis], outer.hi[axis]] {
                let pieces = if removed > 0.0 && cut.lo[axis] <= plane && plane <= cut.hi[axis] {
                    rect_subtract(outer2d, cut2d)
                } else {
                    vec![outer2d]
                };
                for (lo, hi) in pieces {
                    let r = AxisRect { axis, plane, lo, hi };
                    if r.area() > 0.0 {
                        boundary.push(r);
                    }
                }
            }
            for plane in [cut.lo[axis], cut.hi[axis]] {
                if plane <= outer.lo[axis] || plane >= outer.hi[axis] {
                    continue;
                }
                let lo = [cut2d.0[0].max(outer2d.0[0]), cut2d.0[1].max(outer2d.0[1])];
                let hi = [cut2d.1[0].min(outer2d.1[0]), cut2d.1[1].min(outer2d.1[1])];
                let r = AxisRect { axis, plane, lo, hi };
                if r.area() > 0.0 {
                    boundary.push(r);
                }
            }
        }
        Ok(LShape {
            outer,
            cut,
            boundary,
            volume,
        })
    }

    pub fn contains(&self, p: Vec3) -> bool {
        let inside_outer = (0..3).all(|a| p[a] > self.outer.lo[a] && p[a] < self.outer.hi[a]);
        if !inside_outer {
            return false;
        }
        let in_cut = (0..3).all(|a| p[a] >= self.cut.lo[a] && p[a] <= self.cut.hi[a]);
        !in_cut
    }

    /// Exact unsigned distance to the boundary.
    pub fn boundary_distance(&self, p: Vec3) -> f64 {
        self.boundary
            .iter()
            .map(|r| r.distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn bbox(&self) -> Aabb {
        self.outer
    }

    pub fn translated(&self, u: Vec3) -> LShape {
        LShape::new(
            Aabb::new(self.outer.lo + u, self.outer.hi + u),
            Aabb::new(self.cut.lo + u, self.cut.hi + u),
        )
        .expect("translate preserves validity")
    }
}
