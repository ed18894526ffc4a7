//! Command-line front end: `generate`, `fit`, `experiment` and `analyze`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::datagen::{
    sample, ConfigName, GenParams, NamedConfig, PairDataset, DEFAULT_N_PER_STATE,
};
use crate::error::{Error, Result};
use crate::experiment::{
    render_report, run_experiment, run_experiment_on, sig6, ExperimentPlan, Profile, ReportFormat,
};
use crate::gaussian::{grid, tau_curve, tau_from_rho};
use crate::joint_dist::{from_marginals_cov, log_odds_ratio, JointDist22, MarginalsCov};
use crate::model::{ModelFit, ModelKind};
use crate::staged::logit;

#[derive(Debug, Parser)]
#[command(
    name = "labelcovar",
    version,
    about = "Conditional covariance between binary label pairs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a two-state label-pair dataset as `y1,y2,x` CSV.
    Generate(GenerateArgs),
    /// Fit one or more models to a dataset and print the fits as JSON.
    Fit(FitArgs),
    /// Run the detection-rate simulation over the named configurations.
    Experiment(ExperimentArgs),
    /// Reproduce the copula and worked-example analyses.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Named configuration (Zero, Const1, Const4, Const9, Dep41, Dep49, Dep19, Dep01, Dep04, Dep09).
    #[arg(long, conflicts_with_all = ["alpha0", "alpha1", "gamma0", "gamma1", "beta0", "beta1"])]
    pub config: Option<String>,
    /// `p2` in state 0 and state 1, comma separated (with --config).
    #[arg(long, default_value = "0.5,0.5", requires = "config")]
    pub p2: String,
    /// Intercept of p1 (explicit parameters; all six are required without --config).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha0: Option<f64>,
    /// Slope of p1.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha1: Option<f64>,
    /// Intercept of p2.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma0: Option<f64>,
    /// Slope of p2.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma1: Option<f64>,
    /// Intercept of rho.
    #[arg(long, allow_negative_numbers = true)]
    pub beta0: Option<f64>,
    /// Slope of rho.
    #[arg(long, allow_negative_numbers = true)]
    pub beta1: Option<f64>,
    /// Rows per covariate state.
    #[arg(long, default_value_t = DEFAULT_N_PER_STATE)]
    pub n: usize,
    /// Sampling seed.
    #[arg(long, env = "LABELCOVAR_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Output CSV path; a `.meta.json` sidecar is written next to it. Stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Dataset CSV with header `y1,y2,x`.
    pub data: PathBuf,
    /// Models to fit: comma-separated list of probit, bernoulli, staged, or `all`.
    #[arg(long, default_value = "probit")]
    pub model: String,
    /// Output JSON path. Stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProfileArg {
    Desk,
    Paper,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Configurations to run, comma separated, or `all`.
    #[arg(long, default_value = "all")]
    pub configs: String,
    /// Models to fit, comma separated, or `all`.
    #[arg(long, default_value = "all")]
    pub models: String,
    /// Replicates per (config, p2 pair); defaults to the profile's value.
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Rows per covariate state.
    #[arg(long, default_value_t = DEFAULT_N_PER_STATE)]
    pub n_per_state: usize,
    /// p2 levels to cross over the two states, comma separated (default: all five).
    #[arg(long)]
    pub p2_levels: Option<String>,
    /// Master seed.
    #[arg(long, env = "LABELCOVAR_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Wald test level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
    /// Output path. Stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// desk: 25 replicates per cell; paper: 100.
    #[arg(long, value_enum, default_value_t = ProfileArg::Desk)]
    pub profile: ProfileArg,
    /// Worker threads (default: all cores). Does not affect results.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(subcommand)]
    pub target: AnalyzeTarget,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeTarget {
    /// Latent correlation needed to hold rho fixed as p2 varies, as `p2,tau` CSV.
    TauCurve(TauCurveArgs),
    /// Per-model covariance terms of the constant-covariance example, from first principles.
    WorkedExamples(WorkedArgs),
}

#[derive(Debug, Args)]
pub struct TauCurveArgs {
    #[arg(long, default_value_t = 0.5)]
    pub p1: f64,
    #[arg(long, default_value_t = 0.04, allow_negative_numbers = true)]
    pub rho: f64,
    /// p2 grid as start:stop:step.
    #[arg(long, default_value = "0.1:0.9:0.05")]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = CurveFormat::Csv)]
    pub format: CurveFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CurveFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct WorkedArgs {
    #[arg(long, value_enum, default_value_t = CurveFormat::Json)]
    pub format: CurveFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    let mut w = open_output(out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn parse_list<T>(s: &str, all: &[T], parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>>
where
    T: Copy,
{
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(all.to_vec());
    }
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse(p.trim()))
        .collect()
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::OutOfRange(format!("`{p}` is not a number")))
        })
        .collect()
}

/// Sidecar written next to a generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub config: Option<ConfigName>,
    pub params: GenParams,
    pub seed: u64,
}

pub fn meta_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let (config, params) = match &args.config {
        Some(name) => {
            let name: ConfigName = name.parse()?;
            let p2 = parse_floats(&args.p2)?;
            if p2.len() != 2 {
                return Err(Error::OutOfRange(format!(
                    "--p2 needs two values, got {}",
                    p2.len()
                )));
            }
            (
                Some(name),
                NamedConfig::with_p2(name, p2[0], p2[1]).gen_params(args.n)?,
            )
        }
        None => {
            let need = |v: Option<f64>, flag: &str| {
                v.ok_or_else(|| Error::OutOfRange(format!("--{flag} is required without --config")))
            };
            let params = GenParams::new(
                need(args.alpha0, "alpha0")?,
                need(args.alpha1, "alpha1")?,
                need(args.gamma0, "gamma0")?,
                need(args.gamma1, "gamma1")?,
                need(args.beta0, "beta0")?,
                need(args.beta1, "beta1")?,
                args.n,
            )?;
            (None, params)
        }
    };
    let data = sample(&params, args.seed)?;
    let mut w = open_output(args.out.as_deref())?;
    data.write_csv(&mut w)?;
    w.flush()?;
    if let Some(out) = &args.out {
        let meta = DatasetMeta {
            config,
            params,
            seed: args.seed,
        };
        std::fs::write(meta_path(out), serde_json::to_string_pretty(&meta)? + "\n")?;
    }
    Ok(())
}

fn cmd_fit(args: &FitArgs) -> Result<()> {
    let models = parse_list(&args.model, &ModelKind::ALL, |s| s.parse())?;
    if models.is_empty() {
        return Err(Error::OutOfRange("no model given".into()));
    }
    let file = File::open(&args.data)?;
    let data = PairDataset::read_csv(file)?;
    let fits: Vec<ModelFit> = models.iter().map(|m| m.fit(&data)).collect::<Result<_>>()?;
    let json = if fits.len() == 1 {
        serde_json::to_string_pretty(&fits[0])?
    } else {
        serde_json::to_string_pretty(&fits)?
    };
    write_output(args.out.as_deref(), &(json + "\n"))
}

pub fn experiment_plan(args: &ExperimentArgs) -> Result<ExperimentPlan> {
    let profile = match args.profile {
        ProfileArg::Desk => Profile::Desk,
        ProfileArg::Paper => Profile::Paper,
    };
    let mut plan = ExperimentPlan::new(profile, args.seed);
    plan.configs = parse_list(&args.configs, &ConfigName::ALL, |s| s.parse())?;
    plan.models = parse_list(&args.models, &ModelKind::ALL, |s| s.parse())?;
    if let Some(r) = args.replicates {
        plan.replicates = r;
    }
    plan.n_per_state = args.n_per_state;
    plan.alpha = args.alpha;
    if let Some(levels) = &args.p2_levels {
        plan.p2_levels = parse_floats(levels)?;
    }
    plan.validate()?;
    Ok(plan)
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<()> {
    let plan = experiment_plan(args)?;
    let report = match args.threads {
        Some(0) => return Err(Error::InvalidPlan("--threads must be at least 1".into())),
        Some(t) => run_experiment_on(&plan, t)?,
        None => run_experiment(&plan)?,
    };
    let format = match args.format {
        FormatArg::Table => ReportFormat::Table,
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Json => ReportFormat::Json,
    };
    write_output(args.out.as_deref(), &render_report(&report, format)?)
}

/// One `(p2, tau)` point of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p2: f64,
    pub tau: f64,
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::OutOfRange(format!("bad grid `{text}`")))
        })
        .collect::<Result<_>>()?;
    match parts.as_slice() {
        [start, stop, step] => grid(*start, *stop, *step),
        _ => Err(Error::OutOfRange(format!(
            "grid `{text}` is not start:stop:step"
        ))),
    }
}

fn cmd_tau_curve(args: &TauCurveArgs) -> Result<()> {
    let p2_grid = parse_grid(&args.grid)?;
    let mut points = Vec::new();
    for pt in tau_curve(args.p1, args.rho, &p2_grid) {
        match pt.tau {
            Ok(tau) => points.push(CurvePoint { p2: pt.p2, tau }),
            Err(e) => eprintln!("warning: p2 = {} omitted: {e}", sig6(pt.p2)),
        }
    }
    let text = match args.format {
        CurveFormat::Csv => {
            let mut s = String::from("p2,tau\n");
            for p in &points {
                s.push_str(&format!("{},{}\n", sig6(p.p2), sig6(p.tau)));
            }
            s
        }
        CurveFormat::Json => serde_json::to_string_pretty(&points)? + "\n",
    };
    write_output(args.out.as_deref(), &text)
}

/// The per-model covariance terms of a pair with `p1 = 0.5`, `rho = 0.09`,
/// and `p2` moving from 0.3 (state 0) to 0.5 (state 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkedExamples {
    pub state_tables: [JointDist22; 2],
    /// Log odds ratio `f_ij` per state.
    pub bernoulli_f_ij: [f64; 2],
    /// Latent correlation `tau` per state.
    pub probit_tau: [f64; 2],
    /// `logit(p11) - logit(p1 p2)` per state.
    pub staged_residual: [f64; 2],
    /// State-0 table of the Dep19 generation example (`p2 = 0.3`, `rho = 0.01`).
    pub dep19_state0: JointDist22,
}

pub fn worked_examples() -> Result<WorkedExamples> {
    let states = [
        MarginalsCov {
            p1: 0.5,
            p2: 0.3,
            rho: 0.09,
        },
        MarginalsCov {
            p1: 0.5,
            p2: 0.5,
            rho: 0.09,
        },
    ];
    let tables = [
        from_marginals_cov(states[0])?,
        from_marginals_cov(states[1])?,
    ];
    let mut f_ij = [0.0; 2];
    let mut tau = [0.0; 2];
    let mut residual = [0.0; 2];
    for k in 0..2 {
        f_ij[k] = log_odds_ratio(&tables[k])?;
        tau[k] = tau_from_rho(states[k].p1, states[k].p2, states[k].rho)?;
        residual[k] = logit(tables[k].p11) - logit(states[k].p1 * states[k].p2);
    }
    let dep19 = crate::datagen::state_joint(
        &NamedConfig::with_p2(ConfigName::Dep19, 0.3, 0.5).gen_params(DEFAULT_N_PER_STATE)?,
        0,
    )?;
    Ok(WorkedExamples {
        state_tables: tables,
        bernoulli_f_ij: f_ij,
        probit_tau: tau,
        staged_residual: residual,
        dep19_state0: dep19,
    })
}

fn cmd_worked(args: &WorkedArgs) -> Result<()> {
    let w = worked_examples()?;
    let text = match args.format {
        CurveFormat::Json => serde_json::to_string_pretty(&w)? + "\n",
        CurveFormat::Csv => {
            let mut s = String::from("quantity,state,value\n");
            for (name, pair) in [
                ("bernoulli_f_ij", w.bernoulli_f_ij),
                ("probit_tau", w.probit_tau),
                ("staged_residual", w.staged_residual),
            ] {
                for (state, v) in pair.iter().enumerate() {
                    s.push_str(&format!("{name},{state},{}\n", sig6(*v)));
                }
            }
            for (cell, v) in ["p00", "p01", "p10", "p11"]
                .iter()
                .zip(w.dep19_state0.cells())
            {
                s.push_str(&format!("dep19_{cell},0,{}\n", sig6(v)));
            }
            s
        }
    };
    write_output(args.out.as_deref(), &text)
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Analyze(a) => match &a.target {
            AnalyzeTarget::TauCurve(t) => cmd_tau_curve(t),
            AnalyzeTarget::WorkedExamples(w) => cmd_worked(w),
        },
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
