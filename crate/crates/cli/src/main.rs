//! Batch experiment runner and audit driver.
//!
//! Exit codes: 0 when every executed check passes, 1 when an audit or
//! diagnostic fails, 2 on usage or configuration errors.

mod config;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use config::{Settings, SettingsInput};
use std::path::PathBuf;
use thermolim::geom::{vec3, Aabb, Domain, Polytope, Vec3};
use thermolim::harness::{
    self, general_limit_experiment, lower_bound_diagnostic, reference_limit_experiment,
    ExperimentRecord,
};
use thermolim::mc::Quality;
use thermolim::models::audits;
use thermolim::models::{standard_domain_suite, EnergyModel};
use thermolim::ssa;
use thermolim::tiling::{reference_simplex, tile, TileIndex, TilingFrame};

const EXIT_PASS: i32 = 0;
const EXIT_AUDIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(name = "thermolim", version, about = "Energy-model audits and thermodynamic-limit experiments")]
struct Cli {
    /// Worker threads (falls back to THERMOLIM_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Optional TOML file with model parameter blocks; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Model name; falls back to the config file, then to local-sin.
    #[arg(long)]
    model: Option<String>,

    /// Monte Carlo samples per evaluation [default: 200000].
    #[arg(long)]
    samples: Option<u64>,

    /// Random seed [default: 1].
    #[arg(long)]
    seed: Option<u64>,

    /// Results file; records are appended as line-delimited JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonOpts {
    fn model_name(&self, file_cfg: &config::FileConfig) -> String {
        self.model
            .clone()
            .or_else(|| file_cfg.model.name.clone())
            .unwrap_or_else(|| "local-sin".into())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run assumption audits against a model.
    Audit {
        #[command(flatten)]
        common: CommonOpts,
        /// Which check to run: a1, a2, a3, a4, a5, a6 or all.
        #[arg(long, default_value = "all")]
        check: String,
        /// Domain for the single-domain audits.
        #[arg(long, default_value = "ball:3")]
        domain: String,
        #[arg(long, default_value_t = 2.0)]
        ell: f64,
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
    },
    /// Limit experiment over the scaled, moved reference set.
    LimitRef {
        #[command(flatten)]
        common: CommonOpts,
        /// Increasing comma-separated scales.
        #[arg(long, default_value = "2,4,8,16")]
        ell: String,
        #[arg(long, default_value_t = 32)]
        g_samples: u64,
        /// Reference set: simplex or cube.
        #[arg(long, default_value = "simplex")]
        reference: String,
    },
    /// Limit experiment over a growing domain sequence.
    LimitGeneral {
        #[command(flatten)]
        common: CommonOpts,
        /// Sequence spec such as balls:3,6,12 or lshapes:2,4,8.
        #[arg(long, default_value = "balls:3,6,12")]
        domains: String,
        #[arg(long, default_value_t = 24.0)]
        eta_a: f64,
        #[arg(long, default_value_t = 1.0)]
        eta_b: f64,
        #[arg(long, default_value_t = 0.3)]
        eta_c: f64,
        #[arg(long, default_value_t = 4.0)]
        diameter_ratio: f64,
    },
    /// Strong-subadditivity audits of a set function.
    Ssa {
        #[arg(long = "fn", default_value = "gaussian")]
        function: String,
        #[arg(long, default_value_t = 8)]
        ground: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 3)]
        max_block: usize,
        /// Also check the pairwise averaging bound on every subset.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Partition and volume checks of the simplex tiling.
    TilingCheck {
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// The averaged lower-bound diagnostic.
    LowerBound {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value = "ball:8")]
        domain: String,
        #[arg(long, default_value_t = 2.0)]
        ell: f64,
    },
    /// Summarize a results file; optionally emit CSV.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("THERMOLIM_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    };
    std::process::exit(code);
}

fn persist_records(out: &Option<PathBuf>, records: &[ExperimentRecord]) -> Result<()> {
    if let Some(path) = out {
        harness::persist(path, records)?;
        println!("{} records appended to {}", records.len(), path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    let file_cfg = config::load_file(cli.config.as_deref())?;
    match cli.command {
        Command::Audit {
            common,
            check,
            domain,
            ell,
            tau,
        } => {
            let settings = build_settings(&common, &file_cfg, vec![ell.max(1.0)], 1, tau)?;
            let model = config::build_model(&common.model_name(&file_cfg), &file_cfg.model)?;
            let omega = config::parse_domain(&domain)?;
            run_audit(model.as_ref(), &check, &omega, ell, tau, &settings)
        }
        Command::LimitRef {
            common,
            ell,
            g_samples,
            reference,
        } => {
            let grid = config::parse_list(&ell)?;
            let settings = build_settings(&common, &file_cfg, grid.clone(), g_samples, 0.0)?;
            let model = config::build_model(&common.model_name(&file_cfg), &file_cfg.model)?;
            let reference = match reference.as_str() {
                "simplex" => reference_simplex().clone(),
                "cube" => Polytope::cube(Vec3::ZERO, 1.0),
                other => anyhow::bail!("unknown reference '{other}' (simplex or cube)"),
            };
            let (curve, records) = reference_limit_experiment(
                model.as_ref(),
                &reference,
                &settings.ell_grid,
                settings.g_samples,
                Quality::new(settings.samples, settings.seed),
            )?;
            println!("{curve}");
            persist_records(&common.out, &records)?;
            Ok(EXIT_PASS)
        }
        Command::LimitGeneral {
            common,
            domains,
            eta_a,
            eta_b,
            eta_c,
            diameter_ratio,
        } => {
            let mut input = settings_input(&common, &file_cfg, vec![1.0], 1, 0.0);
            input.eta_a = eta_a;
            input.eta_b = eta_b;
            input.eta_c = eta_c;
            let settings = finish_settings(input)?;
            let model = config::build_model(&common.model_name(&file_cfg), &file_cfg.model)?;
            let sequence = config::parse_domain_sequence(&domains)?;
            let (curve, records) = general_limit_experiment(
                model.as_ref(),
                &sequence,
                &settings.eta,
                &[0.05, 0.1, 0.2],
                diameter_ratio,
                settings.samples.min(200_000),
                Quality::new(settings.samples, settings.seed),
            )?;
            println!("{curve}");
            if let Some(limit) = model.exact_limit() {
                let gap = (curve.e_bar - limit).abs() / limit.abs().max(1e-12);
                println!("known limit {limit:.6}, terminal gap {:.3}%", 100.0 * gap);
            }
            persist_records(&common.out, &records)?;
            Ok(EXIT_PASS)
        }
        Command::Ssa {
            function,
            ground,
            trials,
            max_block,
            exhaustive,
            seed,
        } => run_ssa(&function, ground, trials, max_block, exhaustive, seed),
        Command::TilingCheck { ell, samples, seed } => run_tiling_check(ell, samples, seed),
        Command::LowerBound {
            common,
            domain,
            ell,
        } => {
            let settings = build_settings(&common, &file_cfg, vec![ell], 1, 0.0)?;
            let model = config::build_model(&common.model_name(&file_cfg), &file_cfg.model)?;
            let omega = config::parse_domain(&domain)?;
            let report = lower_bound_diagnostic(
                model.as_ref(),
                &omega,
                ell,
                settings.samples,
                settings.seed,
            )?;
            println!(
                "normalized energy {:.6} (+- {:.2e})\nreference average {:.6} (+- {:.2e})\n\
                 boundary shell fraction {:.4}\nmargin {:+.6} => {}",
                report.normalized_energy,
                report.normalized_stderr,
                report.e_average,
                report.e_average_stderr,
                report.shell_fraction,
                report.margin,
                if report.pass { "PASS" } else { "FAIL" }
            );
            Ok(if report.pass { EXIT_PASS } else { EXIT_AUDIT_FAIL })
        }
        Command::Report { input, csv } => {
            let records = harness::read_records(&input)?;
            println!(
                "{:<16} {:>10} {:>12} {:>11} {:>11}",
                "experiment", "param", "mean", "spread", "residual"
            );
            for (exp, param, mean, spread, residual) in harness::summarize(&records) {
                println!("{exp:<16} {param:>10.4} {mean:>12.6} {spread:>11.3e} {residual:>+11.3e}");
            }
            if let Some(path) = csv {
                harness::write_csv(&path, &records)?;
                println!("csv written to {}", path.display());
            }
            Ok(EXIT_PASS)
        }
    }
}

fn settings_input(
    common: &CommonOpts,
    file_cfg: &config::FileConfig,
    ell_grid: Vec<f64>,
    g_samples: u64,
    tau: f64,
) -> SettingsInput {
    SettingsInput {
        samples: common
            .samples
            .or(file_cfg.quality.samples)
            .unwrap_or(200_000),
        seed: common.seed.or(file_cfg.quality.seed).unwrap_or(1),
        ell_grid,
        g_samples,
        tau,
        delta: 1.0,
        eta_a: file_cfg.eta.a.unwrap_or(24.0),
        eta_b: file_cfg.eta.b.unwrap_or(1.0),
        eta_c: file_cfg.eta.c.unwrap_or(0.3),
    }
}

fn finish_settings(input: SettingsInput) -> Result<Settings> {
    config::settings_from(input).map_err(|problems| {
        for p in &problems {
            eprintln!("config error: {p}");
        }
        anyhow::anyhow!("{} configuration problem(s)", problems.len())
    })
}

fn build_settings(
    common: &CommonOpts,
    file_cfg: &config::FileConfig,
    ell_grid: Vec<f64>,
    g_samples: u64,
    tau: f64,
) -> Result<Settings> {
    let input = settings_input(common, file_cfg, ell_grid, g_samples, tau);
    finish_settings(input)
}

fn run_audit(
    model: &dyn EnergyModel,
    check: &str,
    omega: &Domain,
    ell: f64,
    tau: f64,
    settings: &Settings,
) -> Result<i32> {
    let quality = Quality::new(settings.samples, settings.seed);
    let mut all_pass = true;
    let checks: Vec<&str> = match check {
        "all" => vec!["a1", "a2", "a3", "a4", "a5", "a6"],
        single => vec![single],
    };
    for c in checks {
        match c.to_ascii_lowercase().as_str() {
            "a1" => {
                let report = audits::audit_a1_normalization(model)?;
                print!("{report}");
                all_pass &= report.pass;
            }
            "a2" => {
                let report = audits::audit_a2_stability(model, &standard_domain_suite(), quality)?;
                print!("{report}");
                if !report.pass {
                    if let Some(w) = report.worst_row() {
                        println!(
                            "worst violation: {} at E = {:.6} against bound {:.6}",
                            w.label, w.lhs, w.rhs
                        );
                    }
                }
                all_pass &= report.pass;
            }
            "a3" => {
                let report = audits::audit_a3_translation_average(
                    model,
                    omega,
                    &[2.0, 4.0, 8.0, 16.0],
                    48,
                    Quality::new(settings.samples / 4, settings.seed),
                )?;
                println!(
                    "A3 translation average [{}]: {}",
                    model.name(),
                    if report.pass { "PASS" } else { "FAIL" }
                );
                for row in &report.rows {
                    println!(
                        "  L = {:>6.1}: average {:.6} (+- {:.2e}), deviation {:.3e}",
                        row.radius, row.mean, row.stderr, row.deviation
                    );
                }
                println!(
                    "  translated-domain check: {:+.3e} ({})",
                    report.translation_check.lhs - report.translation_check.rhs,
                    if report.translation_check.pass { "ok" } else { "FAIL" }
                );
                all_pass &= report.pass;
            }
            "a4" => {
                // A strictly smaller concentric copy keeps the margin easy to
                // certify for the built-in shapes.
                let bbox = omega.bbox();
                let shrink = 0.55;
                let center = bbox.center();
                let sub = omega
                    .translated(-center)
                    .transformed(&thermolim::motion::RigidMotion::identity(), shrink)
                    .translated(center);
                let report = audits::audit_a4_continuity(
                    model,
                    omega,
                    &sub,
                    model.kappa(),
                    0.001,
                    settings.delta.min(0.2),
                    quality,
                )?;
                print!("{report}");
                all_pass &= report.pass;
            }
            "a5" => {
                let report = audits::audit_a5_subaverage(
                    model,
                    omega,
                    ell.max(1.0),
                    settings.samples,
                    settings.seed,
                    0.05,
                )?;
                println!(
                    "A5 subaverage [{}]: E = {:.6}, average = {:.6} (slack {:+.3e}, {:.2} sigma) => {}",
                    model.name(),
                    report.lhs.value,
                    report.rhs_mean,
                    report.slack,
                    report.equality_sigma,
                    if report.inequality_pass { "PASS" } else { "FAIL" }
                );
                all_pass &= report.inequality_pass;
            }
            "a6" => {
                if !model.decomposable() {
                    println!(
                        "A6 decomposition [{}]: not decomposable, skipped",
                        model.name()
                    );
                    continue;
                }
                let frame = TilingFrame::new(
                    thermolim::motion::RigidMotion::identity(),
                    ell.max(1.0) * 6.0,
                    tau,
                )?;
                let report = audits::audit_a6(model, omega, &frame, 8, quality, 0.01)?;
                print!("{}", report.report);
                all_pass &= report.pass;
            }
            other => anyhow::bail!("unknown check '{other}' (a1..a6 or all)"),
        }
    }
    Ok(if all_pass { EXIT_PASS } else { EXIT_AUDIT_FAIL })
}

fn run_ssa(
    function: &str,
    ground: usize,
    trials: u64,
    max_block: usize,
    exhaustive: bool,
    seed: u64,
) -> Result<i32> {
    let f: Box<dyn ssa::SetFunction> = match function {
        "gaussian" => Box::new(ssa::GaussianEntropyDefect::random(ground, 3, seed)),
        "broken" => Box::new(ssa::BrokenQuadratic { ground }),
        "pairwise" => Box::new(ssa::PairwiseAdditive::random_nonpositive(ground, seed)),
        other => anyhow::bail!("unknown set function '{other}' (gaussian, broken, pairwise)"),
    };
    let ssa_report = ssa::audit_ssa(f.as_ref(), trials, max_block, seed)?;
    println!("{ssa_report}");
    let chain = ssa::derived_chain_audit(f.as_ref(), trials, seed + 1)?;
    println!("{chain}");
    let mut pass = ssa_report.pass && chain.pass;
    if exhaustive {
        let (set, gap, ok) = ssa::pairwise_average_exhaustive(f.as_ref())?;
        println!(
            "pairwise averaging bound over all {} subsets: {} (worst gap {gap:.3e} at {set:#b})",
            1u64 << ground,
            if ok { "PASS" } else { "FAIL" }
        );
        pass &= ok;
    }
    if pass {
        println!("0 violations");
        Ok(EXIT_PASS)
    } else {
        if let Some(w) = ssa_report.worst {
            println!(
                "worst witness: P1 = {:#b}, P2 = {:#b}, P3 = {:#b}, lhs {:.6} > rhs {:.6} \
                 (violation {:.3e})",
                w.p1, w.p2, w.p3, w.lhs, w.rhs, w.violation
            );
        }
        Ok(EXIT_AUDIT_FAIL)
    }
}

fn run_tiling_check(ell: f64, samples: u64, seed: u64) -> Result<i32> {
    let frame = TilingFrame::identity(ell);
    let tiles: Vec<_> = (0..24u8)
        .map(|rot| tile(&frame, TileIndex::new([0, 0, 0], rot)))
        .collect();
    let v0 = tiles[0].exact_volume;
    let closed_form = 24.0 * v0 == ell * ell * ell;
    println!(
        "24 tiles of volume {v0}: closed-form cell volume {} ({})",
        24.0 * v0,
        if closed_form { "exact" } else { "MISMATCH" }
    );
    let h = ell / 2.0;
    let cell = Aabb::new(vec3(-h, -h, -h), vec3(h, h, h));
    let mut rng = thermolim::mc::stream_rng(seed, thermolim::mc::StreamKind::Generic, 0);
    let mut double = 0u64;
    let mut uncovered = 0u64;
    for _ in 0..samples {
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
    let frac = double as f64 / samples as f64;
    println!("{samples} samples: double-cover fraction {frac:.2e}, uncovered {uncovered}");
    let pass = closed_form && frac < 1e-3 && uncovered == 0;
    println!("tiling check: {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { EXIT_PASS } else { EXIT_AUDIT_FAIL })
}
