//! The convergence experiments: the reference-set limit, the general-domain
//! limit, the averaged lower-bound diagnostic, and the consistency of the
//! decomposition-assembled average with the subaverage form.

use super::{ExperimentRecord, LimitCurve};
use crate::geom::{vec3, Domain, EtaClass, Polytope};
use crate::mc::{self, MomentAcc, Quality, StreamKind};
use crate::models::audits::{regularized_volume, subaverage_rhs};
use crate::models::EnergyModel;
use crate::motion::{draw_in_ball, draw_rotation, RigidMotion};
use crate::tiling::{enumerate_intersecting, reference_simplex, TilingFrame};
use crate::{Error, Result, Vec3};

fn derive_seed(seed: u64, salt: u64) -> u64 {
    seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Normalized energies of the moved, scaled reference set at Haar-sampled
/// placements, one curve level per scale. The limit estimate is the mean at
/// the largest scale.
pub fn reference_limit_experiment(
    model: &dyn EnergyModel,
    reference: &Polytope,
    ell_grid: &[f64],
    g_samples: u64,
    quality: Quality,
) -> Result<(LimitCurve, Vec<ExperimentRecord>)> {
    if ell_grid.is_empty() || ell_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("ell grid must be increasing".into()));
    }
    if g_samples == 0 {
        return Err(Error::Precondition("g_samples >= 1 required".into()));
    }
    let mut groups = Vec::new();
    let mut records = Vec::new();
    for (li, &ell) in ell_grid.iter().enumerate() {
        let volume = reference.exact_volume * ell.powi(3);
        let evals = mc::map_indexed(g_samples, |j| -> Result<(f64, f64)> {
            let start = std::time::Instant::now();
            let mut rng = mc::stream_rng(
                quality.seed,
                StreamKind::Experiment,
                (li as u64) * 1_000_000 + j,
            );
            let rot = draw_rotation(&mut rng);
            let u = vec3(
                rand::Rng::random::<f64>(&mut rng),
                rand::Rng::random::<f64>(&mut rng),
                rand::Rng::random::<f64>(&mut rng),
            );
            let motion = RigidMotion::new(rot, u);
            let omega = Domain::polytope(reference.transformed(&motion, ell));
            let e = model.energy(
                &omega,
                Quality::new(
                    quality.samples,
                    derive_seed(quality.seed, (li as u64) << 32 | j),
                ),
            )?;
            let _ = start;
            Ok((e.value, e.stderr))
        });
        let mut values = Vec::with_capacity(g_samples as usize);
        for (j, ev) in evals.into_iter().enumerate() {
            let (value, stderr) = ev?;
            values.push((value / volume, stderr / volume));
            records.push(ExperimentRecord::new(
                "limit-ref",
                &model.name(),
                &format!("reference*{ell}#g{j}"),
                ell,
                value,
                stderr,
                volume,
                quality.seed,
            ));
        }
        groups.push((ell, values));
    }
    Ok((LimitCurve::from_groups(groups), records))
}

/// Normalized energies along a growing domain sequence, with the regularity
/// and diameter-ratio hypotheses checked rather than assumed.
#[allow(clippy::too_many_arguments)]
pub fn general_limit_experiment(
    model: &dyn EnergyModel,
    domains: &[Domain],
    eta: &EtaClass,
    t_grid: &[f64],
    diameter_ratio_bound: f64,
    audit_samples: u64,
    quality: Quality,
) -> Result<(LimitCurve, Vec<ExperimentRecord>)> {
    if domains.is_empty() {
        return Err(Error::Precondition("domain sequence must be nonempty".into()));
    }
    let mut groups = Vec::new();
    let mut records = Vec::new();
    for (n, omega) in domains.iter().enumerate() {
        let vol = omega.require_volume_hint()?;
        let audit = crate::geom::eta_regularity_audit(
            omega,
            eta,
            t_grid,
            audit_samples,
            derive_seed(quality.seed, 300 + n as u64),
        )?;
        if !audit.pass {
            return Err(Error::NotRegular(format!(
                "domain {} fails the boundary-regularity audit",
                omega.descriptor()
            )));
        }
        let ratio = omega.diameter() / vol.cbrt();
        if ratio > diameter_ratio_bound {
            return Err(Error::GuardViolated(format!(
                "diameter ratio {ratio} exceeds bound {diameter_ratio_bound}"
            )));
        }
        let e = model.energy(
            omega,
            Quality::new(quality.samples, derive_seed(quality.seed, n as u64)),
        )?;
        groups.push((vol.cbrt(), vec![(e.value / vol, e.stderr / vol)]));
        records.push(ExperimentRecord::new(
            "limit-general",
            &model.name(),
            &omega.descriptor(),
            vol.cbrt(),
            e.value,
            e.stderr,
            vol,
            quality.seed,
        ));
    }
    Ok((LimitCurve::from_groups(groups), records))
}

#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    /// `E(omega) / |omega|`.
    pub normalized_energy: f64,
    pub normalized_stderr: f64,
    /// Rotation average of the translation-averaged reference energies.
    pub e_average: f64,
    pub e_average_stderr: f64,
    /// Fraction of the volume within the boundary shell the bound budgets
    /// against.
    pub shell_fraction: f64,
    pub shell_stderr: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Guard for the averaged lower bound: the tile scale must stay below this
/// fraction of the domain scale.
pub const LOWER_BOUND_GUARD: f64 = 0.5;

/// Radius of the translation-averaging ball.
pub const TRANSLATION_BALL_RADIUS: f64 = 4.0;

/// The averaged lower bound as a measured diagnostic: the normalized energy
/// must not fall below the rotation-averaged reference energy by more than
/// the boundary-shell fraction plus noise.
pub fn lower_bound_diagnostic(
    model: &dyn EnergyModel,
    omega: &Domain,
    ell: f64,
    samples: u64,
    seed: u64,
) -> Result<LowerBoundReport> {
    let vol = omega.require_volume_hint()?;
    if ell / vol.cbrt() >= LOWER_BOUND_GUARD {
        return Err(Error::GuardViolated(format!(
            "ell / |omega|^(1/3) = {} not below {LOWER_BOUND_GUARD}",
            ell / vol.cbrt()
        )));
    }
    let e = model.energy(omega, Quality::new(samples, derive_seed(seed, 1)))?;
    let normalized = e.value / vol;

    let simplex = reference_simplex();
    let tile_volume = simplex.exact_volume * ell.powi(3);
    let n_rot = 16u64;
    let n_trans = 16u64;
    let inner = (samples / (n_rot * n_trans)).max(2_000);
    let values = mc::map_indexed(n_rot * n_trans, |k| -> Result<f64> {
        let mut rng = mc::stream_rng(seed, StreamKind::Experiment, 7_000_000 + k);
        let rot = draw_rotation(&mut rng);
        let u = draw_in_ball(&mut rng, Vec3::ZERO, TRANSLATION_BALL_RADIUS);
        let motion = RigidMotion::new(rot, u);
        let placed = Domain::polytope(simplex.transformed(&motion, ell));
        let ev = model.energy(&placed, Quality::new(inner, derive_seed(seed, 50 + k)))?;
        Ok(ev.value / tile_volume)
    });
    let mut acc = MomentAcc::default();
    for v in values {
        acc.push(v?);
    }

    let shell_width_t = (1.0 + simplex.circumradius()) * ell / vol.cbrt();
    let shell = crate::geom::sausage_volume_auto(omega, shell_width_t, samples, derive_seed(seed, 2))?;
    let shell_fraction = shell.value / vol;

    let margin = normalized - acc.mean();
    let sigma = (acc.stderr().powi(2) + (e.stderr / vol).powi(2)).sqrt();
    let pass = margin >= -(shell_fraction + 3.0 * (sigma + shell.stderr / vol));
    Ok(LowerBoundReport {
        normalized_energy: normalized,
        normalized_stderr: e.stderr / vol,
        e_average: acc.mean(),
        e_average_stderr: acc.stderr(),
        shell_fraction,
        shell_stderr: shell.stderr / vol,
        margin,
        pass,
    })
}

#[derive(Debug, Clone)]
pub struct AveragingConsistency {
    pub energy: f64,
    pub energy_stderr: f64,
    /// Fundamental-cell average of the assembled decomposition.
    pub assembled_mean: f64,
    pub assembled_stderr: f64,
    /// Subaverage right-hand side at the inflated scale.
    pub subaverage: f64,
    pub subaverage_stderr: f64,
    /// `E - assembled average`.
    pub decomposition_margin: f64,
    /// `assembled average - subaverage`.
    pub chain_margin: f64,
    pub pass: bool,
}

/// Checks that the decomposition pieces, averaged over placements of the
/// tiling, reproduce the subaverage bound: the assembled average dominates
/// the single-tile motion average within noise.
pub fn a6_implies_a5_diagnostic(
    model: &dyn EnergyModel,
    omega: &Domain,
    ell: f64,
    tau: f64,
    samples: u64,
    seed: u64,
) -> Result<AveragingConsistency> {
    if !model.decomposable() {
        return Err(Error::NotDecomposable(model.name()));
    }
    if omega.is_empty() {
        return Ok(AveragingConsistency {
            energy: 0.0,
            energy_stderr: 0.0,
            assembled_mean: 0.0,
            assembled_stderr: 0.0,
            subaverage: 0.0,
            subaverage_stderr: 0.0,
            decomposition_margin: 0.0,
            chain_margin: 0.0,
            pass: true,
        });
    }
    let e = model.energy(omega, Quality::new(samples, derive_seed(seed, 3)))?;
    let draws = 64u64;
    let values = mc::map_indexed(draws, |k| -> Result<f64> {
        let mut rng = mc::stream_rng(seed, StreamKind::InteractionAverage, 500 + k);
        let rot = draw_rotation(&mut rng);
        let u = vec3(
            rand::Rng::random::<f64>(&mut rng) * ell,
            rand::Rng::random::<f64>(&mut rng) * ell,
            rand::Rng::random::<f64>(&mut rng) * ell,
        );
        let frame = TilingFrame::new(RigidMotion::new(rot, u), ell, tau)?;
        let tiles = enumerate_intersecting(&frame, &omega.bbox());
        let d = model.decompose(omega, &frame, &tiles)?;
        Ok(d.assembled_total)
    });
    let mut acc = MomentAcc::default();
    for v in values {
        acc.push(v?);
    }

    let outer = (samples / 500).clamp(200, 2000);
    let inner = (samples / outer).max(500);
    let ell_inflated = ell * (1.0 + tau);
    let (sub_mean, sub_stderr) =
        subaverage_rhs(model, omega, ell_inflated, outer, inner, derive_seed(seed, 4))?;

    let decomposition_margin = e.value - acc.mean();
    let chain_margin = acc.mean() - sub_mean;
    let sigma_dec = (e.stderr.powi(2) + acc.stderr().powi(2)).sqrt();
    let sigma_chain = (acc.stderr().powi(2) + sub_stderr.powi(2)).sqrt();
    let reg = regularized_volume(omega);
    let pass = decomposition_margin.abs() <= 3.0 * sigma_dec + 1e-9 * reg
        && chain_margin >= -3.0 * sigma_chain;
    Ok(AveragingConsistency {
        energy: e.value,
        energy_stderr: e.stderr,
        assembled_mean: acc.mean(),
        assembled_stderr: acc.stderr(),
        subaverage: sub_mean,
        subaverage_stderr: sub_stderr,
        decomposition_margin,
        chain_margin,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Chi, LatticePairModel, LocalFunctionalModel};

    #[test]
    fn constant_chi_reference_curve_is_flat() {
        let model = LocalFunctionalModel::new(Chi::Const(0.75));
        let (curve, records) = reference_limit_experiment(
            &model,
            reference_simplex(),
            &[1.0, 2.0],
            8,
            Quality::new(40_000, 3),
        )
        .unwrap();
        assert_eq!(records.len(), 16);
        for level in &curve.levels {
            assert!(
                (level.mean - 0.75).abs() < 5.0 * (level.stderr + 1e-4),
                "{level:?}"
            );
        }
    }

    #[test]
    fn free_lattice_reference_curve_tends_to_minus_one() {
        let model = LatticePairModel::free_sites();
        let (curve, _) = reference_limit_experiment(
            &model,
            reference_simplex(),
            &[4.0, 8.0],
            12,
            Quality::new(1, 5),
        )
        .unwrap();
        let last = curve.levels.last().unwrap();
        assert!((last.mean + 1.0).abs() < 0.2, "{}", last.mean);
        assert!(
            last.spread <= curve.levels[0].spread + 1e-9,
            "site-count fluctuations shrink with scale"
        );
    }

    #[test]
    fn general_limit_rejects_irregular_eta() {
        let model = LocalFunctionalModel::new(Chi::Const(1.0));
        let eta = EtaClass::linear(0.01, 1.0).unwrap();
        let domains = [Domain::ball(Vec3::ZERO, 3.0)];
        assert!(matches!(
            general_limit_experiment(
                &model,
                &domains,
                &eta,
                &[0.1],
                4.0,
                50_000,
                Quality::new(10_000, 1)
            ),
            Err(Error::NotRegular(_))
        ));
    }

    #[test]
    fn lower_bound_guard_enforced() {
        let model = LocalFunctionalModel::new(Chi::Const(1.0));
        let omega = Domain::ball(Vec3::ZERO, 2.0);
        assert!(matches!(
            lower_bound_diagnostic(&model, &omega, 4.0, 1_000, 1),
            Err(Error::GuardViolated(_))
        ));
    }

    #[test]
    fn averaging_consistency_empty_domain() {
        let model = LatticePairModel::standard();
        let out =
            a6_implies_a5_diagnostic(&model, &Domain::empty(), 2.0, 0.0, 1_000, 1).unwrap();
        assert_eq!(out.energy, 0.0);
        assert_eq!(out.assembled_mean, 0.0);
        assert!(out.pass);
    }
}
