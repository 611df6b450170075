//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use thermolim::geom::{
    self, vec3, Aabb, Domain, EtaClass, LShape, Polytope, Vec3,
};
use thermolim::harness::{
    self, general_limit_experiment, lower_bound_diagnostic, reference_limit_experiment,
};
use thermolim::mc::Quality;
use thermolim::models::audits::{
    audit_a5_subaverage, audit_a6, exact_limit_oracle, volume_averaging_identity,
};
use thermolim::models::{Chi, EnergyModel, LatticePairModel, LocalFunctionalModel};
use thermolim::motion::haar_translation_identity;
use thermolim::ssa::{
    audit_ssa, derived_chain_audit, pairwise_average_exhaustive, BrokenQuadratic,
    GaussianEntropyDefect,
};
use thermolim::tiling::{
    self, reference_simplex, regularity_of_inner_approx_audit, tile, TileIndex, TilingFrame,
};

fn verdict(number: u32, label: &str, pass: bool, detail: String) {
    println!(
        "criterion {number:02} [{label}]: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number:02} [{label}] failed: {detail}");
}

fn standard_lshape(n: f64) -> Domain {
    Domain::lshape(
        LShape::new(
            Aabb::new(Vec3::ZERO, vec3(2.0 * n, 2.0 * n, 2.0 * n)),
            Aabb::new(vec3(n, n, n), vec3(2.0 * n, 2.0 * n, 2.0 * n)),
        )
        .expect("valid lshape"),
    )
}

#[test]
fn c01_tiling_exactness() {
    let frame = TilingFrame::identity(1.0);
    let tiles: Vec<Polytope> = (0..24u8)
        .map(|rot| tile(&frame, TileIndex::new([0, 0, 0], rot)))
        .collect();
    let v0 = tiles[0].exact_volume;
    let volumes_equal = tiles.iter().all(|t| t.exact_volume == v0);
    let closed_form_one = 24.0 * v0 == 1.0;

    let cell = Aabb::new(vec3(-0.5, -0.5, -0.5), vec3(0.5, 0.5, 0.5));
    let mut rng = thermolim::mc::stream_rng(1, thermolim::mc::StreamKind::Generic, 0);
    let n = 1_000_000u64;
    let mut double = 0u64;
    let mut uncovered = 0u64;
    for _ in 0..n {
        let p = cell.sample(&mut rng);
        let interiors = tiles.iter().filter(|t| t.contains(p, -1e-9)).count();
        let closures = tiles.iter().filter(|t| t.contains(p, 1e-9)).count();
        if interiors >= 2 {
            double += 1;
        }
        if closures == 0 {
            uncovered += 1;
        }
    }
    let double_fraction = double as f64 / n as f64;
    verdict(
        1,
        "tiling exactness",
        volumes_equal && closed_form_one && double_fraction < 1e-3 && uncovered == 0,
        format!(
            "24 x {v0} == 1: {closed_form_one}; double-cover fraction {double_fraction:.2e}; \
             uncovered {uncovered}"
        ),
    );
}

#[test]
fn c02_haar_translation_identity() {
    let shapes: Vec<(&str, Domain, Vec3)> = vec![
        ("cube", Domain::cube(Vec3::ZERO, 1.0), Vec3::ZERO),
        (
            "simplex",
            Domain::polytope(reference_simplex().clone()),
            vec3(0.31, -0.12, 0.44),
        ),
        ("ball", Domain::ball(Vec3::ZERO, 1.0), vec3(1.3, 0.2, -0.7)),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (i, (name, a, x)) in shapes.iter().enumerate() {
        let expect = a.volume_hint().unwrap();
        let est = haar_translation_identity(a, *x, 1_000_000, 20 + i as u64).unwrap();
        let sig = est.sigmas_from(expect);
        pass &= sig <= 3.0;
        detail.push_str(&format!(
            "{name}: {:.5} vs {expect:.5} ({sig:.2} sigma); ",
            est.value
        ));
    }
    verdict(2, "Haar translation identity", pass, detail);
}

#[test]
fn c03_volume_averaging_identity() {
    let omega = Domain::ball(Vec3::ZERO, 3.0);
    let mut pass = true;
    let mut detail = String::new();
    for (i, ell) in [1.0f64, 2.0].into_iter().enumerate() {
        let (est, expect) = volume_averaging_identity(&omega, ell, 500_000, 30 + i as u64).unwrap();
        let sig = est.sigmas_from(expect);
        pass &= sig <= 3.0;
        detail.push_str(&format!(
            "ell={ell}: {:.3} vs {expect:.3} ({sig:.2} sigma); ",
            est.value
        ));
    }
    verdict(3, "volume averaging identity", pass, detail);
}

#[test]
fn c04_local_functional_subaverage_equality() {
    let model = LocalFunctionalModel::new(Chi::SinSqX);
    let omega = Domain::ball(Vec3::ZERO, 3.0);
    let report = audit_a5_subaverage(&model, &omega, 2.0, 500_000, 40, 0.0).unwrap();
    verdict(
        4,
        "subaverage equality for the local functional",
        report.equality_pass && report.inequality_pass,
        format!(
            "E = {:.3}, average = {:.3} ({:.2} sigma)",
            report.lhs.value, report.rhs_mean, report.equality_sigma
        ),
    );
}

#[test]
fn c05_convex_sausage_bound() {
    let mut rng = thermolim::mc::stream_rng(50, thermolim::mc::StreamKind::Generic, 0);
    let mut worst = f64::NEG_INFINITY;
    let mut pass = true;
    for i in 0..100 {
        let poly = geom::random_convex_polytope(&mut rng, 18);
        let r = poly.inscribed_radius_origin();
        let volume = poly.exact_volume;
        let domain = Domain::polytope(poly);
        for (k, ratio) in [0.05f64, 0.1, 0.2].into_iter().enumerate() {
            let width = ratio * r;
            let t = width / volume.cbrt();
            let est =
                geom::sausage_volume_auto(&domain, t, 10_000, 500 + 3 * i + k as u64).unwrap();
            let bound = 8.0 * ratio * volume;
            let slack = (est.value - bound) / (3.0 * est.stderr).max(1e-12);
            worst = worst.max(slack);
            pass &= est.value <= bound + 3.0 * est.stderr;
        }
    }
    verdict(
        5,
        "convex boundary within the dilation bound",
        pass,
        format!("100 random polytopes, worst slack {worst:.2} (must be <= 1)"),
    );
}

#[test]
fn c06_strong_subadditivity_suite() {
    let f = GaussianEntropyDefect::random(8, 3, 60);
    let ssa = audit_ssa(&f, 10_000, 3, 61).unwrap();
    let chain = derived_chain_audit(&f, 10_000, 62).unwrap();
    let (worst_set, worst_gap, exhaustive_pass) = pairwise_average_exhaustive(&f).unwrap();
    let broken = BrokenQuadratic { ground: 8 };
    let broken_rejected = !audit_ssa(&broken, 10_000, 3, 63).unwrap().pass;
    verdict(
        6,
        "strong subadditivity suite",
        ssa.pass && chain.pass && exhaustive_pass && broken_rejected,
        format!(
            "ssa worst {:.2e}; chain worst {:.2e}; exhaustive worst {worst_gap:.2e} \
             (set {worst_set:#010b}); broken rejected: {broken_rejected}",
            ssa.worst.map(|w| w.violation).unwrap_or(0.0),
            chain.worst.map(|w| w.violation).unwrap_or(0.0),
        ),
    );
}

#[test]
fn c07_decomposition_regrouping() {
    let model = LatticePairModel::standard();
    let ell = 12.0;
    let inradius = tiling::reference_simplex_inradius() * ell;
    assert!(
        model.r_cut <= inradius,
        "precondition: r_cut {} <= tile inradius {inradius}",
        model.r_cut
    );
    let omega = Domain::cuboid(Aabb::new(Vec3::ZERO, vec3(12.0, 12.0, 12.0)));
    let frame = TilingFrame::identity(ell);
    let report = audit_a6(&model, &omega, &frame, 12, Quality::new(1, 70), 0.0).unwrap();
    let zero_slack = report.lower_slack == 0.0 && report.upper_slack == 0.0;
    let interaction_nonneg = report.interaction_mean >= 0.0;
    verdict(
        7,
        "decomposition regrouping",
        report.pass && zero_slack && interaction_nonneg,
        format!(
            "lower slack {:e}, upper slack {:e}, interaction average {:.4} >= 0",
            report.lower_slack, report.upper_slack, report.interaction_mean
        ),
    );
}

#[test]
fn c08_reference_limit() {
    let model = LocalFunctionalModel::new(Chi::SinSqX);
    let grid = [2.0, 4.0, 8.0, 16.0];
    let q = Quality::new(200_000, 80);
    let (simplex_curve, _) =
        reference_limit_experiment(&model, reference_simplex(), &grid, 32, q).unwrap();
    let terminal_gap = (simplex_curve.e_bar - 0.5).abs();
    let spread_ok = simplex_curve.spread_non_increasing();

    let cube = Polytope::cube(Vec3::ZERO, 1.0);
    let (cube_curve, _) =
        reference_limit_experiment(&model, &cube, &grid, 32, Quality::new(200_000, 81)).unwrap();
    let reference_gap = (cube_curve.e_bar - simplex_curve.e_bar).abs() / simplex_curve.e_bar.abs();
    verdict(
        8,
        "reference-set limit",
        terminal_gap <= 0.02 && spread_ok && reference_gap <= 0.02,
        format!(
            "terminal mean {:.4} (gap {terminal_gap:.4} <= 0.02); spreads {:?} non-increasing: \
             {spread_ok}; cube/simplex limit gap {:.3}%",
            simplex_curve.e_bar,
            simplex_curve
                .levels
                .iter()
                .map(|l| (l.spread * 1e3).round() / 1e3)
                .collect::<Vec<_>>(),
            100.0 * reference_gap
        ),
    );
}

#[test]
fn c09_general_domain_limit() {
    let eta = EtaClass::linear(24.0, 0.3).unwrap();
    let t_grid = [0.05, 0.1, 0.2];
    let balls: Vec<Domain> = [3.0, 6.0, 12.0]
        .iter()
        .map(|&r| Domain::ball(Vec3::ZERO, r))
        .collect();
    let lshapes: Vec<Domain> = [2.0, 4.0, 8.0].iter().map(|&n| standard_lshape(n)).collect();

    let local = LocalFunctionalModel::new(Chi::SinSqX);
    let lattice = LatticePairModel::standard();
    let lattice_limit = exact_limit_oracle(&lattice, &[4.0, 8.0, 16.0], Quality::new(1, 90)).unwrap();

    let mut pass = true;
    let mut detail = String::new();
    for (name, domains) in [("balls", &balls), ("lshapes", &lshapes)] {
        let (curve, _) = general_limit_experiment(
            &local,
            domains,
            &eta,
            &t_grid,
            4.0,
            100_000,
            Quality::new(1_000_000, 91),
        )
        .unwrap();
        let gap = (curve.e_bar - 0.5).abs() / 0.5;
        pass &= gap <= 0.02;
        detail.push_str(&format!("local/{name} gap {:.2}%; ", 100.0 * gap));

        let (curve, _) = general_limit_experiment(
            &lattice,
            domains,
            &eta,
            &t_grid,
            4.0,
            100_000,
            Quality::new(1, 92),
        )
        .unwrap();
        let gap = (curve.e_bar - lattice_limit).abs() / lattice_limit.abs();
        pass &= gap <= 0.02;
        detail.push_str(&format!("lattice/{name} gap {:.2}%; ", 100.0 * gap));
    }
    verdict(
        9,
        "general-domain limit",
        pass,
        format!("{detail}oracle limit {lattice_limit:.4}"),
    );
}

#[test]
fn c10_lower_bound_diagnostic() {
    let omega = Domain::ball(Vec3::ZERO, 8.0);
    let local = LocalFunctionalModel::new(Chi::SinSqX);
    let lattice = LatticePairModel::standard();
    let local_report = lower_bound_diagnostic(&local, &omega, 2.0, 500_000, 100).unwrap();
    let lattice_report = lower_bound_diagnostic(&lattice, &omega, 2.0, 500_000, 101).unwrap();
    // For the local functional every step in the averaged bound is tight.
    let sigma = (local_report.e_average_stderr.powi(2)
        + local_report.normalized_stderr.powi(2))
    .sqrt();
    let local_tight = local_report.margin.abs() <= 3.0 * sigma + 0.01;
    verdict(
        10,
        "averaged lower bound",
        local_report.pass && lattice_report.pass && local_tight,
        format!(
            "local margin {:+.4} (tight: {local_tight}), lattice margin {:+.4}, shell fraction {:.2}",
            local_report.margin, lattice_report.margin, lattice_report.shell_fraction
        ),
    );
}

#[test]
fn c11_inner_approximation_regularity() {
    let omega = Domain::ball(Vec3::ZERO, 10.0);
    let eta = EtaClass::linear(13.0, 0.3).unwrap();
    let t_grid = [0.05, 0.1, 0.2];
    let mut pass = true;
    let mut deficits = Vec::new();
    let mut detail = String::new();
    for (i, ell) in [2.0f64, 1.0, 0.5].into_iter().enumerate() {
        let frame = TilingFrame::identity(ell);
        let out = regularity_of_inner_approx_audit(
            &omega,
            &eta,
            &frame,
            0.1,
            64.0,
            &t_grid,
            100_000,
            110 + i as u64,
        )
        .unwrap();
        pass &= out.report.pass && out.m_passing.is_finite() && out.m_passing <= 64.0;
        deficits.push(out.deficit_fraction);
        detail.push_str(&format!(
            "ell={ell}: m <= {:.2}, deficit {:.3}; ",
            out.m_passing, out.deficit_fraction
        ));
    }
    let monotone = deficits.windows(2).all(|w| w[1] <= w[0]);
    verdict(
        11,
        "inner approximation stays regular",
        pass && monotone,
        format!("{detail}deficits decrease as the tiles shrink: {monotone}"),
    );
}

#[test]
fn c12_determinism() {
    let model = LocalFunctionalModel::new(Chi::SinSqX);
    let grid = [2.0, 4.0];
    let run = || {
        let (_, records) = reference_limit_experiment(
            &model,
            reference_simplex(),
            &grid,
            8,
            Quality::new(50_000, 120),
        )
        .unwrap();
        records
            .iter()
            .map(|r| serde_json::to_string(r).unwrap())
            .collect::<Vec<_>>()
            .join("\n")
    };
    let first = run();
    let second = run();
    let pool_one = {
        #[cfg(feature = "parallel")]
        {
            rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap()
                .install(run)
        }
        #[cfg(not(feature = "parallel"))]
        {
            run()
        }
    };
    verdict(
        12,
        "byte-identical replay",
        first == second && first == pool_one,
        format!(
            "rerun identical: {}; single-thread pool identical: {}",
            first == second,
            first == pool_one
        ),
    );
}
