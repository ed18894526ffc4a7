//! Simulation harness: for every configuration, `p2` pair and replicate,
//! generate a two-state dataset, fit each model and record whether the Wald
//! tests on `beta0` and `beta1` reject at level `alpha`.
//!
//! Every dataset seed is derived from `(master_seed, config, pair, replicate)`
//! and results are gathered in grid order, so reports do not depend on the
//! number of worker threads.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::{derive_seed, sample, ConfigName, Family, NamedConfig, P2_LEVELS};
use crate::error::{Error, Result};
use crate::mle::DEFAULT_ALPHA;
use crate::model::{CovCoeff, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// 25 replicates per cell.
    Desk,
    /// 100 replicates per cell.
    Paper,
}

impl Profile {
    pub fn replicates(&self) -> usize {
        match self {
            Profile::Desk => 25,
            Profile::Paper => 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub configs: Vec<ConfigName>,
    pub models: Vec<ModelKind>,
    /// Replicates per `(config, p2 pair)` cell.
    pub replicates: usize,
    pub n_per_state: usize,
    pub master_seed: u64,
    pub alpha: f64,
    /// `p2` levels crossed over the two states; a subset of [`P2_LEVELS`].
    pub p2_levels: Vec<f64>,
}

impl ExperimentPlan {
    pub fn new(profile: Profile, master_seed: u64) -> Self {
        Self {
            configs: ConfigName::ALL.to_vec(),
            models: ModelKind::ALL.to_vec(),
            replicates: profile.replicates(),
            n_per_state: crate::datagen::DEFAULT_N_PER_STATE,
            master_seed,
            alpha: DEFAULT_ALPHA,
            p2_levels: P2_LEVELS.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.configs.is_empty() {
            return Err(Error::InvalidPlan("no configurations selected".into()));
        }
        if self.models.is_empty() {
            return Err(Error::InvalidPlan("no models selected".into()));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidPlan("replicates must be at least 1".into()));
        }
        if self.n_per_state == 0 {
            return Err(Error::InvalidPlan("n_per_state must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidPlan(format!(
                "alpha {} not in (0, 1)",
                self.alpha
            )));
        }
        if self.p2_levels.is_empty() {
            return Err(Error::InvalidPlan("no p2 levels selected".into()));
        }
        for p in &self.p2_levels {
            if level_index(*p).is_none() {
                return Err(Error::InvalidPlan(format!(
                    "p2 level {p} is not one of {P2_LEVELS:?}"
                )));
            }
        }
        Ok(())
    }

    /// Grid cells of one configuration, each with its index in the full 5x5 grid.
    pub fn cells(&self, config: ConfigName) -> Vec<(usize, NamedConfig)> {
        let mut levels: Vec<usize> = self
            .p2_levels
            .iter()
            .filter_map(|p| level_index(*p))
            .collect();
        levels.sort_unstable();
        levels.dedup();
        let mut out = Vec::new();
        for &i in &levels {
            for &j in &levels {
                let pair_index = i * P2_LEVELS.len() + j;
                out.push((
                    pair_index,
                    NamedConfig::with_p2(config, P2_LEVELS[i], P2_LEVELS[j]),
                ));
            }
        }
        out
    }
}

fn level_index(p: f64) -> Option<usize> {
    P2_LEVELS.iter().position(|l| (l - p).abs() < 1e-9)
}

/// Detection counts for one `(config, p2 pair, model)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub config: ConfigName,
    pub pair_index: usize,
    pub p2_state0: f64,
    pub p2_state1: f64,
    pub model: ModelKind,
    pub replicates: usize,
    pub failures: usize,
    pub detections_beta0: usize,
    pub detections_beta1: usize,
}

impl CellResult {
    pub fn fitted(&self) -> usize {
        self.replicates - self.failures
    }

    pub fn detections(&self, c: CovCoeff) -> usize {
        match c {
            CovCoeff::Beta0 => self.detections_beta0,
            CovCoeff::Beta1 => self.detections_beta1,
        }
    }

    /// Share of successfully fitted replicates that rejected; `None` if every fit failed.
    pub fn proportion(&self, c: CovCoeff) -> Option<f64> {
        let fitted = self.fitted();
        (fitted > 0).then(|| self.detections(c) as f64 / fitted as f64)
    }
}

/// Fits `model` to `replicates` datasets of one grid cell.
pub fn run_cell(
    cell: &NamedConfig,
    pair_index: usize,
    model: ModelKind,
    replicates: usize,
    n_per_state: usize,
    master_seed: u64,
    alpha: f64,
) -> Result<CellResult> {
    let params = cell.gen_params(n_per_state)?;
    let outcomes: Vec<Option<(bool, bool)>> = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let seed = derive_seed(master_seed, cell.name.as_str(), pair_index, rep);
            let data = sample(&params, seed).ok()?;
            let fit = model.fit(&data).ok()?;
            Some((
                fit.wald(CovCoeff::Beta0, alpha).significant,
                fit.wald(CovCoeff::Beta1, alpha).significant,
            ))
        })
        .collect();
    let mut result = CellResult {
        config: cell.name,
        pair_index,
        p2_state0: cell.p2_state0,
        p2_state1: cell.p2_state1,
        model,
        replicates,
        failures: 0,
        detections_beta0: 0,
        detections_beta1: 0,
    };
    for outcome in outcomes {
        match outcome {
            Some((b0, b1)) => {
                result.detections_beta0 += usize::from(b0);
                result.detections_beta1 += usize::from(b1);
            }
            None => result.failures += 1,
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub config: ConfigName,
    pub model: ModelKind,
    pub coefficient: CovCoeff,
    /// Mean over `p2` pairs of the per-pair detection proportion.
    pub proportion: Option<f64>,
    /// Population standard deviation of the per-pair proportions.
    pub sd: Option<f64>,
    /// Detections over all fitted replicates, pooled across pairs.
    pub pooled: Option<f64>,
    pub detections: usize,
    pub fitted: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub plan: ExperimentPlan,
    pub rows: Vec<ReportRow>,
    pub cells: Vec<CellResult>,
}

impl ExperimentReport {
    pub fn row(&self, config: ConfigName, model: ModelKind, c: CovCoeff) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.config == config && r.model == model && r.coefficient == c)
    }
}

fn aggregate(config: ConfigName, model: ModelKind, c: CovCoeff, cells: &[CellResult]) -> ReportRow {
    let props: Vec<f64> = cells.iter().filter_map(|cell| cell.proportion(c)).collect();
    let (proportion, sd) = if props.is_empty() {
        (None, None)
    } else {
        let n = props.len() as f64;
        let mean = props.iter().sum::<f64>() / n;
        let var = props.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / n;
        (Some(mean), Some(var.sqrt()))
    };
    let detections = cells.iter().map(|cell| cell.detections(c)).sum();
    let fitted: usize = cells.iter().map(CellResult::fitted).sum();
    ReportRow {
        config,
        model,
        coefficient: c,
        proportion,
        sd,
        pooled: (fitted > 0).then(|| detections as f64 / fitted as f64),
        detections,
        fitted,
        failures: cells.iter().map(|cell| cell.failures).sum(),
    }
}

pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let mut units = Vec::new();
    for &config in &plan.configs {
        for (pair_index, cell) in plan.cells(config) {
            for &model in &plan.models {
                units.push((pair_index, cell, model));
            }
        }
    }
    let cells: Vec<CellResult> = units
        .par_iter()
        .map(|(pair_index, cell, model)| {
            run_cell(
                cell,
                *pair_index,
                *model,
                plan.replicates,
                plan.n_per_state,
                plan.master_seed,
                plan.alpha,
            )
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for &config in &plan.configs {
        for &model in &plan.models {
            let group: Vec<CellResult> = cells
                .iter()
                .filter(|c| c.config == config && c.model == model)
                .cloned()
                .collect();
            for c in CovCoeff::BOTH {
                rows.push(aggregate(config, model, c, &group));
            }
        }
    }
    Ok(ExperimentReport {
        plan: plan.clone(),
        rows,
        cells,
    })
}

/// Runs the experiment on a dedicated pool of `threads` workers.
pub fn run_experiment_on(plan: &ExperimentPlan, threads: usize) -> Result<ExperimentReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidPlan(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_experiment(plan))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

/// Formats `v` with six significant digits.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{:.5}", v);
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

fn opt6(v: Option<f64>) -> String {
    v.map(sig6).unwrap_or_else(|| "NA".into())
}

pub fn render_report(r: &ExperimentReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(r)? + "\n"),
        ReportFormat::Csv => {
            let mut out = String::from("config,model,coefficient,proportion,sd,failures\n");
            for row in &r.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    row.config,
                    row.model,
                    row.coefficient,
                    opt6(row.proportion),
                    opt6(row.sd),
                    row.failures
                );
            }
            Ok(out)
        }
        ReportFormat::Table => Ok(render_table(r)),
    }
}

fn render_table(r: &ExperimentReport) -> String {
    let mut configs = r.plan.configs.clone();
    configs.sort();
    configs.dedup();
    let models = &r.plan.models;
    let width = 26;
    let mut out = String::new();
    for c in CovCoeff::BOTH {
        let caption = match c {
            CovCoeff::Beta0 => "Detecting constant label covariance (beta0)",
            CovCoeff::Beta1 => "Detecting dependent label covariance (beta1)",
        };
        let _ = writeln!(out, "{caption}");
        let _ = write!(out, "{:<8}", "");
        for m in models {
            let _ = write!(out, "{:>width$}", m.title());
        }
        out.push('\n');
        let mut family: Option<Family> = None;
        for &config in &configs {
            if family != Some(config.family()) {
                family = Some(config.family());
                let _ = writeln!(out, "{}", config.family().title());
            }
            let _ = write!(out, "{:<8}", config.as_str());
            for &m in models {
                let cell = r
                    .row(config, m, c)
                    .map(|row| format!("{} ({})", opt6(row.proportion), opt6(row.sd)))
                    .unwrap_or_else(|| "NA".into());
                let _ = write!(out, "{cell:>width$}");
            }
            out.push('\n');
        }
        out.push('\n');
    }
    let failures: usize = r
        .rows
        .iter()
        .filter(|row| row.coefficient == CovCoeff::Beta0)
        .map(|row| row.failures)
        .sum();
    let _ = writeln!(
        out,
        "replicates per cell: {}, n per state: {}, seed: {}, failed fits: {}",
        r.plan.replicates, r.plan.n_per_state, r.plan.master_seed, failures
    );
    out
}
