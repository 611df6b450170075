//! Geometric measure, exact and Monte Carlo: volumes, signed distances,
//! boundary-sausage volumes, diameters, and boundary-regularity audits.

pub mod domain;
pub mod lshape;
pub mod polytope;
pub mod vec;

pub use domain::{Domain, Shape};
pub use lshape::LShape;
pub use polytope::{Halfspace, Polytope};
pub use vec::{vec3, Aabb, Vec3};

use crate::mc::{self, MeasureEstimate, StreamKind};
use crate::{Error, Result};
use rand::Rng;

/// Power-law regularity bound `eta(t) = a t^b` on the domain `[0, c)`.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct EtaClass {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl EtaClass {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Precondition("eta: a > 0 required".into()));
        }
        if !(b > 0.0 && b <= 1.0) {
            return Err(Error::Precondition("eta: b in (0, 1] required".into()));
        }
        if !(c > 0.0) {
            return Err(Error::Precondition("eta: c > 0 required".into()));
        }
        Ok(Self { a, b, c })
    }

    pub fn linear(a: f64, c: f64) -> Result<Self> {
        Self::new(a, 1.0, c)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..self.c).contains(&t) {
            return Err(Error::EtaUndefined { t, c: self.c });
        }
        Ok(self.a * t.powf(self.b))
    }
}

/// Volume of a domain: exact short-circuit for balls, boxes, convex polytopes
/// and disjoint tile unions, hit-or-miss Monte Carlo over the bounding box
/// otherwise.
pub fn volume(domain: &Domain, samples: u64, seed: u64) -> Result<MeasureEstimate> {
    if let Some(v) = domain.volume_shortcircuit() {
        return Ok(MeasureEstimate::exact(v, seed));
    }
    volume_monte_carlo(domain, samples, seed)
}

/// Hit-or-miss volume estimate over the bounding box; unbiased and
/// deterministic for a fixed seed.
pub fn volume_monte_carlo(domain: &Domain, samples: u64, seed: u64) -> Result<MeasureEstimate> {
    if matches!(domain.shape, Shape::Empty) {
        return Ok(MeasureEstimate::exact(0.0, seed));
    }
    if samples == 0 {
        return Err(Error::Precondition("samples >= 1 required".into()));
    }
    let bbox = domain.bbox();
    if bbox.is_degenerate() {
        return Err(Error::EmptyBoundingBox);
    }
    let acc = mc::mc_mean(samples, seed, StreamKind::Volume, |rng| {
        if domain.contains(bbox.sample(rng)) {
            1.0
        } else {
            0.0
        }
    });
    Ok(MeasureEstimate::from_moments(&acc, bbox.volume(), seed))
}

/// Measure of the boundary sausage `{x : d(x, boundary) <= |omega|^(1/3) t}`,
/// estimated over the bounding box inflated by the sausage width. The
/// distance oracle must return unsigned distances to the boundary.
pub fn sausage_volume<F>(
    domain: &Domain,
    dist: &F,
    t: f64,
    samples: u64,
    seed: u64,
) -> Result<MeasureEstimate>
where
    F: Fn(Vec3) -> f64 + Sync + ?Sized,
{
    if !(t >= 0.0) {
        return Err(Error::Precondition("t >= 0 required".into()));
    }
    if samples == 0 {
        return Err(Error::Precondition("samples >= 1 required".into()));
    }
    let vol = domain.require_volume_hint()?;
    let width = vol.cbrt() * t;
    let bbox = domain.bbox();
    if bbox.is_degenerate() {
        return Err(Error::EmptyBoundingBox);
    }
    if width > bbox.diagonal() {
        return Err(Error::SausageTooWide { width });
    }
    let inflated = bbox.inflate(width);
    let acc = mc::mc_mean(samples, seed, StreamKind::Sausage, |rng| {
        if dist(inflated.sample(rng)) <= width {
            1.0
        } else {
            0.0
        }
    });
    Ok(MeasureEstimate::from_moments(&acc, inflated.volume(), seed))
}

/// Sausage volume using the domain's own exact boundary-distance oracle.
pub fn sausage_volume_auto(
    domain: &Domain,
    t: f64,
    samples: u64,
    seed: u64,
) -> Result<MeasureEstimate> {
    let d = domain.clone();
    let oracle = move |p: Vec3| d.boundary_distance(p).expect("distance oracle");
    if domain.boundary_distance(domain.bbox().center()).is_none() {
        return Err(Error::Precondition(format!(
            "{} has no exact boundary-distance oracle",
            domain.descriptor()
        )));
    }
    sausage_volume(domain, &oracle, t, samples, seed)
}

#[derive(Debug, Clone)]
pub struct RegularityRow {
    pub t: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub bound: f64,
    /// Excess over the bound in standard errors (negative when below).
    pub margin_sigma: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub rows: Vec<RegularityRow>,
    pub pass: bool,
}

/// Audit of the boundary-regularity bound: for each grid point the sausage
/// measure is compared against `|omega| eta(t)`. One-sided at three standard
/// errors, since the bound is an upper bound.
pub fn eta_regularity_audit(
    domain: &Domain,
    eta: &EtaClass,
    t_grid: &[f64],
    samples: u64,
    seed: u64,
) -> Result<RegularityReport> {
    let vol = domain.require_volume_hint()?;
    let mut rows = Vec::with_capacity(t_grid.len());
    let mut pass = true;
    for (i, &t) in t_grid.iter().enumerate() {
        let bound = vol * eta.eval(t)?;
        let est = sausage_volume_auto(domain, t, samples, seed.wrapping_add(i as u64))?;
        let margin_sigma = if est.stderr > 0.0 {
            (est.value - bound) / est.stderr
        } else if est.value <= bound {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
        let row_pass = margin_sigma <= 3.0;
        pass &= row_pass;
        rows.push(RegularityRow {
            t,
            estimate: est.value,
            stderr: est.stderr,
            bound,
            margin_sigma,
            pass: row_pass,
        });
    }
    Ok(RegularityReport { rows, pass })
}

/// Exact diameter for balls, boxes and polytopes; bounding-box diagonal (a
/// certified upper bound) otherwise.
pub fn diameter(domain: &Domain) -> f64 {
    domain.diameter()
}

/// Random bounded convex polytope with the origin strictly inside: the hull
/// of points on a random-radius sphere, recentred at the vertex average. The
/// inscribed-ball radius about the origin is then `min` over face offsets.
pub fn random_convex_polytope<R: Rng>(rng: &mut R, n_points: usize) -> Polytope {
    loop {
        let radius = 0.8 + 1.2 * rng.random::<f64>();
        let mut pts = Vec::with_capacity(n_points);
        for _ in 0..n_points {
            let mut v;
            loop {
                v = vec3(
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                );
                if v.norm_sq() > 1e-4 && v.norm_sq() <= 1.0 {
                    break;
                }
            }
            pts.push(v.normalized() * radius);
        }
        if let Ok(hull) = Polytope::from_vertices(&pts) {
            let centered = hull.translated(-hull.vertex_centroid());
            if centered.inscribed_radius_origin() > 1e-3 {
                return centered;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BALL_VOL: f64 = 4.0 * std::f64::consts::PI / 3.0;

    #[test]
    fn volume_exact_paths() {
        let ball = Domain::ball(Vec3::ZERO, 1.0);
        let est = volume(&ball, 10, 7).unwrap();
        assert_eq!(est.value, BALL_VOL);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn unit_cube_every_sample_hits() {
        let cube = Domain::cube(Vec3::ZERO, 1.0);
        let est = volume_monte_carlo(&cube, 1_000_000, 7).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn lshape_volume_matches_inclusion_exclusion() {
        let l = LShape::new(
            Aabb::new(vec3(0.0, 0.0, 0.0), vec3(2.0, 2.0, 2.0)),
            Aabb::new(vec3(1.0, 1.0, 1.0), vec3(2.0, 2.0, 2.0)),
        )
        .unwrap();
        let d = Domain::lshape(l);
        let est = volume(&d, 1_000_000, 3).unwrap();
        assert!(est.samples > 0, "lshape goes through the MC path");
        assert!(est.sigmas_from(7.0) <= 3.0, "{} vs 7", est.value);
    }

    #[test]
    fn empty_bounding_box_is_an_error() {
        let d = Domain::clip(
            Domain::cube(Vec3::ZERO, 1.0),
            Domain::cube(vec3(5.0, 0.0, 0.0), 1.0),
        );
        assert!(matches!(
            volume_monte_carlo(&d, 100, 1),
            Err(Error::EmptyBoundingBox)
        ));
    }

    #[test]
    fn ball_sausage_matches_annulus_closed_form() {
        let ball = Domain::ball(Vec3::ZERO, 1.0);
        let s = 0.1;
        let t = s / BALL_VOL.cbrt();
        let est = sausage_volume_auto(&ball, t, 500_000, 5).unwrap();
        let exact = BALL_VOL * ((1.0 + s).powi(3) - (1.0 - s).powi(3));
        assert!((exact - 2.5216517).abs() < 1e-6);
        assert!(est.sigmas_from(exact) <= 3.0, "{} vs {exact}", est.value);
    }

    #[test]
    fn sausage_at_zero_width_vanishes() {
        let cube = Domain::cube(Vec3::ZERO, 1.0);
        let est = sausage_volume_auto(&cube, 0.0, 100_000, 5).unwrap();
        assert!(est.value <= 3.0 * est.stderr.max(1e-12));
    }

    #[test]
    fn cube_sausage_under_convexity_bound() {
        // Inscribed radius 0.5; absolute width 0.05 gives bound 8*0.05/0.5.
        let cube = Domain::cube(Vec3::ZERO, 1.0);
        let w = 0.05;
        let est = sausage_volume_auto(&cube, w, 400_000, 6).unwrap();
        // Steiner outer tube plus the inner shell of the unit cube.
        let pi = std::f64::consts::PI;
        let outer = 6.0 * w + 3.0 * pi * w * w + 4.0 / 3.0 * pi * w.powi(3);
        let inner = 1.0 - (1.0 - 2.0 * w).powi(3);
        let exact = outer + inner;
        assert!(est.sigmas_from(exact) <= 3.0, "{} vs {exact}", est.value);
        assert!(est.value <= 8.0 * w / 0.5 + 3.0 * est.stderr);
    }

    #[test]
    fn sausage_width_guard() {
        let cube = Domain::cube(Vec3::ZERO, 1.0);
        assert!(matches!(
            sausage_volume_auto(&cube, 100.0, 100, 1),
            Err(Error::SausageTooWide { .. })
        ));
    }

    #[test]
    fn eta_audit_ball_passes_linear_bound() {
        // Annulus oracle: sausage(t) / |B| = 6 s + 2 s^3 with s = |B|^(1/3) t,
        // so a = 13 >= 6 |B|^(1/3) ~ 9.67 passes with slack.
        let ball = Domain::ball(Vec3::ZERO, 1.0);
        let eta = EtaClass::linear(13.0, 1.0).unwrap();
        let report =
            eta_regularity_audit(&ball, &eta, &[0.05, 0.1, 0.2], 200_000, 2).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn eta_audit_cube_fails_tiny_bound() {
        let cube = Domain::cube(Vec3::ZERO, 1.0);
        let eta = EtaClass::linear(0.01, 1.0).unwrap();
        let report = eta_regularity_audit(&cube, &eta, &[0.1], 100_000, 2).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn eta_audit_empty_grid_vacuous() {
        let ball = Domain::ball(Vec3::ZERO, 1.0);
        let eta = EtaClass::linear(1.0, 1.0).unwrap();
        let report = eta_regularity_audit(&ball, &eta, &[], 100, 2).unwrap();
        assert!(report.pass);
        assert!(report.rows.is_empty());
    }

    #[test]
    fn eta_audit_rejects_t_outside_domain() {
        let ball = Domain::ball(Vec3::ZERO, 1.0);
        let eta = EtaClass::linear(13.0, 0.15).unwrap();
        assert!(matches!(
            eta_regularity_audit(&ball, &eta, &[0.2], 100, 2),
            Err(Error::EtaUndefined { .. })
        ));
    }

    #[test]
    fn eta_verdicts_scale_invariant() {
        // Dilating the domain does not change the audit verdicts.
        let grid = [0.05, 0.1, 0.2];
        let pass_eta = EtaClass::linear(13.0, 1.0).unwrap();
        let fail_eta = EtaClass::linear(2.0, 1.0).unwrap();
        for lambda in [2.0, 5.0] {
            let base = Domain::ball(Vec3::ZERO, 1.0);
            let dilated = Domain::ball(Vec3::ZERO, lambda);
            for (eta, expect) in [(&pass_eta, true), (&fail_eta, false)] {
                let a = eta_regularity_audit(&base, eta, &grid, 200_000, 9).unwrap();
                let b = eta_regularity_audit(&dilated, eta, &grid, 200_000, 9).unwrap();
                assert_eq!(a.pass, expect);
                assert_eq!(b.pass, expect, "lambda = {lambda}");
            }
        }
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&Domain::ball(Vec3::ZERO, 1.0)), 2.0);
        let cube = Domain::cube(Vec3::ZERO, 1.0);
        assert!((diameter(&cube) - 3.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mc_volume_agrees_with_exact_on_random_polytopes() {
        let mut rng = crate::mc::stream_rng(55, StreamKind::Generic, 0);
        for i in 0..10 {
            let poly = random_convex_polytope(&mut rng, 20);
            let exact = poly.exact_volume;
            let d = Domain::polytope(poly);
            let est = volume_monte_carlo(&d, 100_000, 100 + i).unwrap();
            assert!(
                est.sigmas_from(exact) <= 4.0,
                "poly {i}: {} vs {exact} ({} sigma)",
                est.value,
                est.sigmas_from(exact)
            );
        }
    }
}
