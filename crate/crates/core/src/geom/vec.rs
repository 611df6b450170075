//! Points, vectors and axis-aligned boxes in three dimensions.

use rand::Rng;
use std::ops::{Add, Div, Index, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const fn vec3(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3 { x, y, z }
}

impl Vec3 {
    pub const ZERO: Vec3 = vec3(0.0, 0.0, 0.0);

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        vec3(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Vec3 {
        self / self.norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn min_with(self, o: Vec3) -> Vec3 {
        vec3(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn max_with(self, o: Vec3) -> Vec3 {
        vec3(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }

    /// An arbitrary unit vector orthogonal to `self` (which must be nonzero).
    pub fn any_orthogonal(self) -> Vec3 {
        let other = if self.x.abs() < 0.9 {
            vec3(1.0, 0.0, 0.0)
        } else {
            vec3(0.0, 1.0, 0.0)
        };
        self.cross(other).normalized()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        vec3(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        vec3(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        vec3(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        vec3(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        vec3(-self.x, -self.y, -self.z)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index out of range"),
        }
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub lo: Vec3,
    pub hi: Vec3,
}

impl Aabb {
    pub fn new(lo: Vec3, hi: Vec3) -> Self {
        Self { lo, hi }
    }

    pub fn from_points<'a, I: IntoIterator<Item = &'a Vec3>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut b = Aabb::new(first, first);
        for &p in it {
            b.lo = b.lo.min_with(p);
            b.hi = b.hi.max_with(p);
        }
        Some(b)
    }

    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.lo.x
            && p.x <= self.hi.x
            && p.y >= self.lo.y
            && p.y <= self.hi.y
            && p.z >= self.lo.z
            && p.z <= self.hi.z
    }

    pub fn volume(&self) -> f64 {
        let d = self.hi - self.lo;
        if d.x <= 0.0 || d.y <= 0.0 || d.z <= 0.0 {
            0.0
        } else {
            d.x * d.y * d.z
        }
    }

    pub fn diagonal(&self) -> f64 {
        (self.hi - self.lo).norm()
    }

    pub fn center(&self) -> Vec3 {
        (self.lo + self.hi) * 0.5
    }

    pub fn is_degenerate(&self) -> bool {
        self.volume() <= 0.0
    }

    pub fn inflate(&self, s: f64) -> Aabb {
        Aabb::new(self.lo - vec3(s, s, s), self.hi + vec3(s, s, s))
    }

    pub fn intersect(&self, o: &Aabb) -> Aabb {
        Aabb::new(self.lo.max_with(o.lo), self.hi.min_with(o.hi))
    }

    pub fn union(&self, o: &Aabb) -> Aabb {
        Aabb::new(self.lo.min_with(o.lo), self.hi.max_with(o.hi))
    }

    /// Uniform point; consumes exactly three draws.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec3 {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        let w: f64 = rng.random();
        vec3(
            self.lo.x + u * (self.hi.x - self.lo.x),
            self.lo.y + v * (self.hi.y - self.lo.y),
            self.lo.z + w * (self.hi.z - self.lo.z),
        )
    }

    pub fn corners(&self) -> [Vec3; 8] {
        let (l, h) = (self.lo, self.hi);
        [
            vec3(l.x, l.y, l.z),
            vec3(h.x, l.y, l.z),
            vec3(l.x, h.y, l.z),
            vec3(h.x, h.y, l.z),
            vec3(l.x, l.y, h.z),
            vec3(h.x, l.y, h.z),
            vec3(l.x, h.y, h.z),
            vec3(h.x, h.y, h.z),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_basics() {
        let b = Aabb::new(vec3(0.0, 0.0, 0.0), vec3(2.0, 1.0, 0.5));
        assert_eq!(b.volume(), 1.0);
        assert!(b.contains(vec3(1.0, 0.5, 0.25)));
        assert!(!b.contains(vec3(3.0, 0.5, 0.25)));
        assert!((b.diagonal() - (4.0f64 + 1.0 + 0.25).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cross_is_orthogonal() {
        let a = vec3(1.0, 2.0, 3.0);
        let b = vec3(-0.5, 0.25, 4.0);
        let c = a.cross(b);
        assert!(c.dot(a).abs() < 1e-12);
        assert!(c.dot(b).abs() < 1e-12);
    }
}
