//! The sliding group of orientation-preserving isometries: rotations as unit
//! quaternions, rigid motions `x -> R x + u`, Haar-uniform rotation sampling
//! and the translation averaging identity.
//!
//! The invariant measure is normalized as `du x dR` with `dR` the probability
//! Haar measure on the rotation group, so averaging the indicator of a set
//! over all motions of a point recovers exactly the set's volume.

use crate::geom::{Domain, Vec3};
use crate::mc::{self, MeasureEstimate, StreamKind};
use crate::{Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;

/// Rotation as a unit quaternion `(w, x, y, z)`.
#[derive(Debug, Clone, Copy)]
pub struct Rotation {
    q: [f64; 4],
}

impl Rotation {
    pub fn identity() -> Self {
        Self { q: [1.0, 0.0, 0.0, 0.0] }
    }

    pub fn from_quaternion(q: [f64; 4]) -> Result<Self> {
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        if !(n.is_finite() && n > 1e-12) {
            return Err(Error::DegenerateGeometry("zero quaternion".into()));
        }
        Ok(Self {
            q: [q[0] / n, q[1] / n, q[2] / n, q[3] / n],
        })
    }

    /// Rotation by `angle` about a (not necessarily unit) axis.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Result<Self> {
        let a = axis.normalized();
        let (s, c) = (angle / 2.0).sin_cos();
        Self::from_quaternion([c, s * a.x, s * a.y, s * a.z])
    }

    pub fn quaternion(&self) -> [f64; 4] {
        self.q
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        // v' = v + 2 w (u x v) + 2 u x (u x v), u the vector part.
        let [w, x, y, z] = self.q;
        let u = Vec3 { x, y, z };
        let uv = u.cross(v);
        v + uv * (2.0 * w) + u.cross(uv) * 2.0
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        let [a, b, c, d] = self.q;
        let [e, f, g, h] = other.q;
        Rotation {
            q: [
                a * e - b * f - c * g - d * h,
                a * f + b * e + c * h - d * g,
                a * g - b * h + c * e + d * f,
                a * h + b * g - c * f + d * e,
            ],
        }
    }

    pub fn inverse(&self) -> Rotation {
        let [w, x, y, z] = self.q;
        Rotation { q: [w, -x, -y, -z] }
    }

    /// Rotation angle in `[0, pi]`.
    pub fn angle(&self) -> f64 {
        let [w, x, y, z] = self.q;
        let v = (x * x + y * y + z * z).sqrt();
        2.0 * v.atan2(w.abs())
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let [w, x, y, z] = self.q;
        [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ]
    }
}

/// Element `(u, R)` of the sliding group, acting as `x -> R x + u`.
#[derive(Debug, Clone, Copy)]
pub struct RigidMotion {
    pub rot: Rotation,
    pub trans: Vec3,
}

impl RigidMotion {
    pub fn identity() -> Self {
        Self {
            rot: Rotation::identity(),
            trans: Vec3::ZERO,
        }
    }

    pub fn new(rot: Rotation, trans: Vec3) -> Self {
        Self { rot, trans }
    }

    pub fn translation(u: Vec3) -> Self {
        Self {
            rot: Rotation::identity(),
            trans: u,
        }
    }

    pub fn apply(&self, x: Vec3) -> Vec3 {
        self.rot.apply(x) + self.trans
    }

    /// `(self . other) x = self(other(x))`.
    pub fn compose(&self, other: &RigidMotion) -> RigidMotion {
        RigidMotion {
            rot: self.rot.compose(&other.rot),
            trans: self.rot.apply(other.trans) + self.trans,
        }
    }

    pub fn inverse(&self) -> RigidMotion {
        let inv = self.rot.inverse();
        RigidMotion {
            rot: inv,
            trans: -inv.apply(self.trans),
        }
    }
}

/// Haar-uniform rotation, deterministic in `(seed, index)`: a standard
/// 4-normal draw normalized to the sphere, folded to nonnegative scalar part.
pub fn sample_rotation(seed: u64, index: u64) -> Rotation {
    let mut rng = mc::stream_rng(seed, StreamKind::Rotation, index);
    draw_rotation(&mut rng)
}

/// Haar-uniform rotation from an existing stream.
pub fn draw_rotation<R: Rng>(rng: &mut R) -> Rotation {
    loop {
        let w: f64 = rng.sample(StandardNormal);
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if n > 1e-9 {
            let s = if w < 0.0 { -1.0 } else { 1.0 } / n;
            return Rotation {
                q: [w * s, x * s, y * s, z * s],
            };
        }
    }
}

/// Uniform point in the ball of radius `radius` about `center`; consumes a
/// fixed number of draws.
pub fn draw_in_ball<R: Rng>(rng: &mut R, center: Vec3, radius: f64) -> Vec3 {
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        let n = (x * x + y * y + z * z).sqrt();
        if n > 1e-12 {
            let u: f64 = rng.random();
            let r = radius * u.cbrt();
            return center + Vec3 { x, y, z } * (r / n);
        }
    }
}

/// Monte Carlo check of the averaging identity: the motion-average of the
/// indicator `1_A(g^{-1} x)` equals `|A|`, independent of `x`. Translations
/// are sampled from a box that covers the support, rotations from the Haar
/// measure.
pub fn haar_translation_identity(
    a: &Domain,
    x: Vec3,
    samples: u64,
    seed: u64,
) -> Result<MeasureEstimate> {
    let needed = a.circumradius_origin();
    haar_translation_identity_with_radius(a, x, needed * 1.01, samples, seed)
}

/// Same check with an explicit sampling half-width for the translation box;
/// fails when the box cannot cover the support.
pub fn haar_translation_identity_with_radius(
    a: &Domain,
    x: Vec3,
    radius: f64,
    samples: u64,
    seed: u64,
) -> Result<MeasureEstimate> {
    let needed = a.circumradius_origin();
    if radius < needed {
        return Err(Error::SupportNotCovered { radius, needed });
    }
    if samples == 0 {
        return Err(Error::Precondition("samples >= 1 required".into()));
    }
    let box_vol = (2.0 * radius).powi(3);
    let acc = mc::mc_mean(samples, seed, StreamKind::HaarIdentity, |rng| {
        let rot = draw_rotation(rng);
        let hw = radius;
        let u = Vec3 {
            x: x.x - hw + 2.0 * hw * rng.random::<f64>(),
            y: x.y - hw + 2.0 * hw * rng.random::<f64>(),
            z: x.z - hw + 2.0 * hw * rng.random::<f64>(),
        };
        let pulled_back = rot.inverse().apply(x - u);
        if a.contains(pulled_back) {
            1.0
        } else {
            0.0
        }
    });
    Ok(MeasureEstimate::from_moments(&acc, box_vol, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec3;

    #[test]
    fn group_axioms_on_random_triples() {
        for i in 0..10_000u64 {
            let g = RigidMotion::new(sample_rotation(3, 2 * i), vec3(0.3, -1.0, 2.0) * ((i % 7) as f64));
            let h = RigidMotion::new(sample_rotation(4, 2 * i + 1), vec3(-0.5, 0.25, 0.75));
            let x = vec3(1.0, -2.0, 0.5);
            let lhs = g.compose(&h).apply(x);
            let rhs = g.apply(h.apply(x));
            assert!(lhs.dist(rhs) < 1e-9);
            assert!(g.inverse().apply(g.apply(x)).dist(x) < 1e-9);
        }
    }

    #[test]
    fn rotation_matrix_is_special_orthogonal() {
        let r = sample_rotation(5, 0);
        let m = r.matrix();
        // Columns orthonormal.
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-9);
            }
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        assert!((det - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rotation_samples_mean_direction_vanishes() {
        let n = 1_000_000u64;
        let acc = mc::mc_mean(n, 9, StreamKind::Rotation, |rng| {
            draw_rotation(rng).apply(vec3(1.0, 0.0, 0.0)).x
        });
        // Component of a uniform direction: variance 1/3.
        assert!(acc.mean().abs() < 4.0 * acc.stderr().max(1e-9));
    }

    #[test]
    fn rotation_angle_mean_matches_density() {
        // Angle density (1 - cos t)/pi on [0, pi]: mean is pi/2 + 2/pi.
        let n = 1_000_000u64;
        let acc = mc::mc_mean(n, 10, StreamKind::Rotation, |rng| draw_rotation(rng).angle());
        let expect = std::f64::consts::FRAC_PI_2 + 2.0 / std::f64::consts::PI;
        assert!((acc.mean() - expect).abs() < 4.0 * acc.stderr());
    }

    #[test]
    fn haar_invariance_under_fixed_composition() {
        let fixed = Rotation::from_axis_angle(vec3(1.0, 2.0, -1.0), 1.1).unwrap();
        let n = 1_000_000u64;
        let plain = mc::mc_mean(n, 11, StreamKind::Rotation, |rng| {
            draw_rotation(rng).apply(vec3(1.0, 0.0, 0.0)).z
        });
        let composed = mc::mc_mean(n, 12, StreamKind::Rotation, |rng| {
            fixed.compose(&draw_rotation(rng)).apply(vec3(1.0, 0.0, 0.0)).z
        });
        let sigma = (plain.stderr().powi(2) + composed.stderr().powi(2)).sqrt();
        assert!((plain.mean() - composed.mean()).abs() < 4.0 * sigma);
    }

    #[test]
    fn sphere_moments_up_to_order_four() {
        let n = 1_000_000u64;
        for (power, expect) in [(1, 0.0), (2, 1.0 / 3.0), (3, 0.0), (4, 1.0 / 5.0)] {
            let acc = mc::mc_mean(n, 13 + power as u64, StreamKind::Rotation, |rng| {
                draw_rotation(rng).apply(vec3(1.0, 0.0, 0.0)).x.powi(power)
            });
            assert!(
                (acc.mean() - expect).abs() < 4.0 * acc.stderr(),
                "moment {power}: {} vs {expect}",
                acc.mean()
            );
        }
    }
}
