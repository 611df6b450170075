//! Convergence experiments and their persisted, replayable results.

pub mod experiments;

pub use experiments::{
    a6_implies_a5_diagnostic, general_limit_experiment, lower_bound_diagnostic,
    reference_limit_experiment, AveragingConsistency, LowerBoundReport,
};

use crate::{Error, Result};
use std::io::{BufRead, Write};
use std::path::Path;

pub const SCHEMA_VERSION: &str = "v1";

/// One evaluation of one experiment. The wall-clock time is kept for the
/// run summary but not persisted, so that replaying a configuration yields a
/// byte-identical results file.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ExperimentRecord {
    pub v: String,
    pub experiment: String,
    pub model: String,
    pub domain: String,
    /// Scale or sequence index of the evaluation.
    pub param: f64,
    pub value: f64,
    pub stderr: f64,
    pub volume: f64,
    pub normalized: f64,
    pub seed: u64,
    #[serde(skip)]
    pub wall_ms: u64,
}

impl ExperimentRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        experiment: &str,
        model: &str,
        domain: &str,
        param: f64,
        value: f64,
        stderr: f64,
        volume: f64,
        seed: u64,
    ) -> Self {
        Self {
            v: SCHEMA_VERSION.into(),
            experiment: experiment.into(),
            model: model.into(),
            domain: domain.into(),
            param,
            value,
            stderr,
            volume,
            normalized: value / volume,
            seed,
            wall_ms: 0,
        }
    }
}

/// Append records to a line-delimited results file.
pub fn persist(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    for r in records {
        let line = serde_json::to_string(r)
            .map_err(|e| Error::MalformedRecord { line: 0, reason: e.to_string() })?;
        writeln!(file, "{line}")?;
    }
    file.flush()?;
    Ok(())
}

/// Read a results file back; malformed lines are reported with their number.
pub fn read_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ExperimentRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                line: i + 1,
                reason: e.to_string(),
            })?;
        if record.v != SCHEMA_VERSION {
            return Err(Error::MalformedRecord {
                line: i + 1,
                reason: format!("unsupported schema version {}", record.v),
            });
        }
        out.push(record);
    }
    Ok(out)
}

/// Emit records as CSV for plotting.
pub fn write_csv(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "experiment,param,value,stderr,volume,normalized,seed")?;
    for r in records {
        writeln!(
            file,
            "{},{},{},{},{},{},{}",
            r.experiment, r.param, r.value, r.stderr, r.volume, r.normalized, r.seed
        )?;
    }
    Ok(())
}

/// Per-level statistics of a limit experiment.
#[derive(Debug, Clone)]
pub struct LevelStat {
    pub param: f64,
    pub mean: f64,
    pub stderr: f64,
    /// Sup minus inf of the normalized values over the sampled placements.
    pub spread: f64,
    /// Average single-evaluation standard error: the noise floor of the
    /// spread statistic.
    pub eval_stderr: f64,
    /// Mean minus the estimated limit.
    pub residual: f64,
}

/// An estimated convergence curve: one row per scale, the limit taken from
/// the largest scale.
#[derive(Debug, Clone)]
pub struct LimitCurve {
    pub levels: Vec<LevelStat>,
    pub e_bar: f64,
}

impl LimitCurve {
    pub fn from_groups(groups: Vec<(f64, Vec<(f64, f64)>)>) -> LimitCurve {
        let mut levels: Vec<LevelStat> = groups
            .into_iter()
            .map(|(param, values)| {
                let mut acc = crate::mc::MomentAcc::default();
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                let mut eval_stderr = 0.0;
                for &(v, s) in &values {
                    acc.push(v);
                    lo = lo.min(v);
                    hi = hi.max(v);
                    eval_stderr += s;
                }
                eval_stderr /= values.len().max(1) as f64;
                LevelStat {
                    param,
                    mean: acc.mean(),
                    stderr: acc.stderr(),
                    spread: if values.len() > 1 { hi - lo } else { 0.0 },
                    eval_stderr,
                    residual: 0.0,
                }
            })
            .collect();
        let e_bar = levels.last().map(|l| l.mean).unwrap_or(0.0);
        for l in &mut levels {
            l.residual = l.mean - e_bar;
        }
        LimitCurve { levels, e_bar }
    }

    /// Spread is non-increasing across the grid, allowing one standard error
    /// of the underlying evaluations as slack per step.
    pub fn spread_non_increasing(&self) -> bool {
        self.levels.windows(2).all(|w| {
            let noise = w[0].eval_stderr.max(w[1].eval_stderr).max(w[0].stderr.max(w[1].stderr));
            w[1].spread <= w[0].spread + noise
        })
    }
}

impl std::fmt::Display for LimitCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:>10} {:>12} {:>11} {:>11} {:>11}", "param", "mean", "stderr", "spread", "residual")?;
        for l in &self.levels {
            writeln!(
                f,
                "{:>10.4} {:>12.6} {:>11.3e} {:>11.3e} {:>+11.3e}",
                l.param, l.mean, l.stderr, l.spread, l.residual
            )?;
        }
        write!(f, "estimated limit: {:.6}", self.e_bar)
    }
}

/// Aggregate raw records into per-(experiment, param) summary rows:
/// `(experiment, param, mean, spread, residual-vs-terminal)`.
pub fn summarize(records: &[ExperimentRecord]) -> Vec<(String, f64, f64, f64, f64)> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(String, u64), (f64, Vec<f64>)> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.experiment.clone(), r.param.to_bits()))
            .or_insert((r.param, Vec::new()))
            .1
            .push(r.normalized);
    }
    let mut per_exp: BTreeMap<String, Vec<(f64, f64, f64)>> = BTreeMap::new();
    for ((exp, _), (param, values)) in groups {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let spread = if values.len() > 1 {
            values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - values.iter().cloned().fold(f64::INFINITY, f64::min)
        } else {
            0.0
        };
        per_exp.entry(exp).or_default().push((param, mean, spread));
    }
    let mut out = Vec::new();
    for (exp, mut rows) in per_exp {
        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let terminal = rows.last().map(|r| r.1).unwrap_or(0.0);
        for (param, mean, spread) in rows {
            out.push((exp.clone(), param, mean, spread, mean - terminal));
        }
    }
    out
}
