//! Configuration handling: optional TOML file for model parameter blocks,
//! command-line flags for scalars, flags taking precedence.

use anyhow::{anyhow, Context, Result};
use serde::Deserialize;
use thermolim::geom::{vec3, Aabb, Domain, EtaClass, LShape, Vec3};
use thermolim::models::{
    BrokenStabilityModel, Chi, EnergyModel, GaussianFreeEnergyModel, LatticePairModel,
    LocalFunctionalModel,
};

#[derive(Debug, Default, Deserialize)]
pub struct FileConfig {
    #[serde(default)]
    pub model: ModelParams,
    #[serde(default)]
    pub quality: QualityParams,
    #[serde(default)]
    pub eta: EtaParams,
}

#[derive(Debug, Default, Deserialize)]
pub struct ModelParams {
    pub name: Option<String>,
    pub chi_const: Option<f64>,
    pub self_energy: Option<f64>,
    pub charge_sq: Option<f64>,
    pub screening: Option<f64>,
    pub r_cut: Option<f64>,
    pub site_energy: Option<f64>,
    pub temperature: Option<f64>,
    pub sigma: Option<f64>,
    pub jitter: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
pub struct QualityParams {
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
pub struct EtaParams {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
}

pub fn load_file(path: Option<&std::path::Path>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
        }
    }
}

/// A human-readable configuration problem: field path plus reason.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub field: String,
    pub reason: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

/// Validated knobs shared by the subcommands.
#[derive(Debug, Clone)]
pub struct Settings {
    pub samples: u64,
    pub seed: u64,
    pub ell_grid: Vec<f64>,
    pub g_samples: u64,
    pub delta: f64,
    pub eta: EtaClass,
}

pub struct SettingsInput {
    pub samples: u64,
    pub seed: u64,
    pub ell_grid: Vec<f64>,
    pub g_samples: u64,
    pub tau: f64,
    pub delta: f64,
    pub eta_a: f64,
    pub eta_b: f64,
    pub eta_c: f64,
}

/// Checks every numeric parameter against the preconditions of the
/// operations it feeds; returns an empty list when all is well.
pub fn validate(input: &SettingsInput) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if input.samples == 0 {
        out.push(Diagnostic {
            field: "samples".into(),
            reason: "must be >= 1".into(),
        });
    }
    if input.g_samples == 0 {
        out.push(Diagnostic {
            field: "g-samples".into(),
            reason: "must be >= 1".into(),
        });
    }
    if input.tau < 0.0 || !input.tau.is_finite() {
        out.push(Diagnostic {
            field: "tau".into(),
            reason: "must be >= 0".into(),
        });
    }
    if input.delta <= 0.0 || !input.delta.is_finite() {
        out.push(Diagnostic {
            field: "delta".into(),
            reason: "must be > 0".into(),
        });
    }
    if input.ell_grid.is_empty() {
        out.push(Diagnostic {
            field: "ell".into(),
            reason: "grid must be nonempty".into(),
        });
    }
    if input.ell_grid.iter().any(|&l| l <= 0.0 || !l.is_finite()) {
        out.push(Diagnostic {
            field: "ell".into(),
            reason: "entries must be positive".into(),
        });
    }
    if input.ell_grid.windows(2).any(|w| w[0] >= w[1]) {
        out.push(Diagnostic {
            field: "ell".into(),
            reason: "grid must be strictly increasing".into(),
        });
    }
    if input.eta_a <= 0.0 {
        out.push(Diagnostic {
            field: "eta.a".into(),
            reason: "a > 0 required".into(),
        });
    }
    if !(input.eta_b > 0.0 && input.eta_b <= 1.0) {
        out.push(Diagnostic {
            field: "eta.b".into(),
            reason: "b in (0, 1] required".into(),
        });
    }
    if input.eta_c <= 0.0 {
        out.push(Diagnostic {
            field: "eta.c".into(),
            reason: "c > 0 required".into(),
        });
    }
    out
}

pub fn settings_from(input: SettingsInput) -> std::result::Result<Settings, Vec<Diagnostic>> {
    let problems = validate(&input);
    if !problems.is_empty() {
        return Err(problems);
    }
    Ok(Settings {
        samples: input.samples,
        seed: input.seed,
        ell_grid: input.ell_grid,
        g_samples: input.g_samples,
        delta: input.delta,
        eta: EtaClass::new(input.eta_a, input.eta_b, input.eta_c).expect("validated"),
    })
}

/// Builds a model from its name plus the parameter block, flags first.
pub fn build_model(name: &str, params: &ModelParams) -> Result<Box<dyn EnergyModel>> {
    match name {
        "local-sin" => Ok(Box::new(LocalFunctionalModel::new(Chi::SinSqX))),
        "local-const" => Ok(Box::new(LocalFunctionalModel::new(Chi::Const(
            params.chi_const.unwrap_or(1.0),
        )))),
        "lattice" | "lattice-pair" => {
            let base = LatticePairModel::standard();
            Ok(Box::new(LatticePairModel::new(
                params.self_energy.unwrap_or(base.self_energy),
                params.charge_sq.unwrap_or(base.charge_sq),
                params.screening.unwrap_or(base.screening),
                params.r_cut.unwrap_or(base.r_cut),
            )))
        }
        "lattice-free" => Ok(Box::new(LatticePairModel::free_sites())),
        "gaussian" => {
            let base = GaussianFreeEnergyModel::standard();
            Ok(Box::new(GaussianFreeEnergyModel::new(
                params.site_energy.unwrap_or(base.site_energy),
                params.temperature.unwrap_or(base.temperature),
                params.sigma.unwrap_or(base.sigma),
                params.jitter.unwrap_or(base.jitter),
            )))
        }
        "broken-fixture" => Ok(Box::new(BrokenStabilityModel)),
        other => Err(anyhow!(
            "unknown model '{other}' (expected local-sin, local-const, lattice, \
             lattice-free, gaussian, broken-fixture)"
        )),
    }
}

/// Parses a single domain spec: `ball:R`, `cube:SIDE`, `box:X0,Y0,Z0,X1,Y1,Z1`
/// or `lshape:N` (the box `[0,2N]^3` minus the corner `[N,2N]^3`).
pub fn parse_domain(spec: &str) -> Result<Domain> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("domain spec '{spec}' must look like kind:params"))?;
    let nums: Vec<f64> = args
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("{spec}: {e}")))
        .collect::<Result<_>>()?;
    match (kind, nums.as_slice()) {
        ("ball", [r]) if *r > 0.0 => Ok(Domain::ball(Vec3::ZERO, *r)),
        ("cube", [side]) if *side > 0.0 => Ok(Domain::cube(Vec3::ZERO, *side)),
        ("box", [x0, y0, z0, x1, y1, z1]) => Ok(Domain::cuboid(Aabb::new(
            vec3(*x0, *y0, *z0),
            vec3(*x1, *y1, *z1),
        ))),
        ("lshape", [n]) if *n > 0.0 => {
            let l = LShape::new(
                Aabb::new(Vec3::ZERO, vec3(2.0 * n, 2.0 * n, 2.0 * n)),
                Aabb::new(vec3(*n, *n, *n), vec3(2.0 * n, 2.0 * n, 2.0 * n)),
            )?;
            Ok(Domain::lshape(l))
        }
        _ => Err(anyhow!("unrecognized domain spec '{spec}'")),
    }
}

/// Parses a sequence spec: `balls:3,6,12` or `lshapes:2,4,8`.
pub fn parse_domain_sequence(spec: &str) -> Result<Vec<Domain>> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("sequence spec '{spec}' must look like kind:params"))?;
    let nums: Vec<f64> = args
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("{spec}: {e}")))
        .collect::<Result<_>>()?;
    nums.iter()
        .map(|&v| parse_domain(&format!("{}:{v}", kind.trim_end_matches('s'))))
        .collect()
}

pub fn parse_list(arg: &str) -> Result<Vec<f64>> {
    arg.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("{arg}: {e}")))
        .collect()
}
