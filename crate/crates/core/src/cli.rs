//! Command-line front end: `validate`, `evaluate`, `predict` and
//! `synthesize`.
//!
//! Every option may also come from a JSON config file (`--config`); options
//! given on the command line win. Exit codes: 0 success, 2 input or schema
//! error, 3 not enough data.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::dataset::{generate_synthetic, parse_dataset, validate_csv, OrdinalDataset, Row, Scale, Schema, SyntheticSpec};
use crate::error::{Error, Result};
use crate::kano::DEFAULT_TAU;
use crate::ordeval::{OrdEvalParams, DEFAULT_K};
use crate::pipeline::{evaluate, predict, EvaluateOptions, PredictOptions};
use crate::predict::{TreeParams, DEFAULT_FOLDS};
use crate::report::{render_attribute_plot, render_summary_plot, to_canonical_json, Palette};
use crate::significance::{SignificanceParams, DEFAULT_ALPHA, DEFAULT_RESAMPLES};

#[derive(Debug, Parser)]
#[command(
    name = "ordeval",
    version,
    about = "Value-level evaluation of ordinal survey attributes, Kano typing and response prediction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a CSV file against its scales and report answer counts per column.
    Validate(InputArgs),
    /// Reinforcement factors, null boxes, significance and Kano types (report.json + SVGs).
    Evaluate(EvaluateArgs),
    /// Cross-validated naive Bayes and decision tree, ranking of unlabeled rows.
    Predict(PredictArgs),
    /// Write a synthetic dataset with planted attribute types.
    Synthesize(SynthesizeArgs),
}

#[derive(Debug, Args, Default)]
pub struct InputArgs {
    /// JSON config file; options given on the command line override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Input CSV (comma-separated, header row, empty cell = missing).
    #[arg(long, short, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Name of the response column (required here or in the config).
    #[arg(long, value_name = "COLUMN")]
    pub response: Option<String>,
    /// Column holding row identifiers [default: none, rows are numbered from 1].
    #[arg(long, value_name = "COLUMN")]
    pub id_column: Option<String>,
    /// Scale of every column without its own --scale [default: 1..5, the five-point
    /// Likert agreement scale].
    #[arg(long, value_name = "MIN..MAX")]
    pub default_scale: Option<Scale>,
    /// Per-column scale override, repeatable.
    #[arg(long = "scale", value_name = "COLUMN=MIN..MAX", value_parser = parse_column_scale)]
    pub scales: Vec<(String, Scale)>,
}

#[derive(Debug, Args, Default)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Context size: nearest respondents consulted per respondent [default: 10, clamped to n-1].
    #[arg(long)]
    pub k: Option<usize>,
    /// Response permutations for the null distribution [default: 200, minimum 20].
    #[arg(long)]
    pub resamples: Option<usize>,
    /// Significance level; whiskers at the alpha/2 and 1-alpha/2 percentiles
    /// [default: 0.05, i.e. 2.5 and 97.5 percentile whiskers of a 95% interval].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Reinforcement at or above this counts as influential for Kano typing
    /// [default: 0.6, the usual cut-off below which influence is negligible].
    #[arg(long)]
    pub tau: Option<f64>,
    /// Seed for the permutation null (required; there is no clock-based default).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory [default: current directory].
    #[arg(long, short, value_name = "DIR")]
    pub output: Option<PathBuf>,
    /// Orange/blue bars instead of red/blue.
    #[arg(long)]
    pub colorblind: bool,
}

#[derive(Debug, Args, Default)]
pub struct PredictArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Seed for fold assignment (required; there is no clock-based default).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cross-validation folds [default: 10, suited to small samples].
    #[arg(long)]
    pub folds: Option<usize>,
    /// Minimum rows in at least two children of a tree split [default: 2].
    #[arg(long)]
    pub min_leaf: Option<usize>,
    /// Maximum tree depth [default: unbounded].
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Output directory [default: current directory].
    #[arg(long, short, value_name = "DIR")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    /// JSON synthetic spec (n, attributes with kind/pivot/scale, noise, response scale).
    #[arg(long, value_name = "FILE")]
    pub spec: PathBuf,
    #[arg(long)]
    pub seed: u64,
    /// Blank the response of the last N rows, making them unlabeled [default: 0].
    #[arg(long, default_value_t = 0)]
    pub unlabeled: usize,
    /// Write row ids under this column name.
    #[arg(long, value_name = "COLUMN")]
    pub id_column: Option<String>,
    /// Output CSV path.
    #[arg(long, short, value_name = "FILE")]
    pub output: PathBuf,
}

fn parse_column_scale(s: &str) -> std::result::Result<(String, Scale), String> {
    let (col, scale) = s.rsplit_once('=').ok_or_else(|| format!("`{s}` is not COLUMN=MIN..MAX"))?;
    let scale: Scale = scale.parse().map_err(|e: Error| e.to_string())?;
    Ok((col.to_owned(), scale))
}

/// Options as read from a config file or assembled from flags. Every field is
/// optional; [`RunConfig::overlay`] applies flags on top of a file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub response: Option<String>,
    pub id_column: Option<String>,
    pub default_scale: Option<Scale>,
    #[serde(default)]
    pub scales: BTreeMap<String, Scale>,
    pub k: Option<usize>,
    pub resamples: Option<usize>,
    pub alpha: Option<f64>,
    pub tau: Option<f64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub folds: Option<usize>,
    pub min_leaf: Option<usize>,
    pub max_depth: Option<usize>,
    pub colorblind: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidParams(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `top` replace those in `self`; scale maps are merged.
    pub fn overlay(mut self, top: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if top.$f.is_some() { self.$f = top.$f; } )* };
        }
        take!(input, response, id_column, default_scale, k, resamples, alpha, tau, seed, output, folds, min_leaf, max_depth, colorblind);
        self.scales.extend(top.scales);
        self
    }

    fn schema(&self) -> Result<Schema> {
        let response = self
            .response
            .clone()
            .ok_or_else(|| Error::InvalidParams("--response is required".into()))?;
        let mut schema = Schema::new(response).with_default_scale(self.default_scale.unwrap_or_default());
        schema.id_column = self.id_column.clone();
        schema.scales = self.scales.clone();
        Ok(schema)
    }

    fn input(&self) -> Result<&Path> {
        self.input.as_deref().ok_or_else(|| Error::InvalidParams("--input is required".into()))
    }

    fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| Error::InvalidParams("--seed is required".into()))
    }

    fn output(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn evaluate_options(&self) -> Result<EvaluateOptions> {
        let opts = EvaluateOptions {
            ordeval: OrdEvalParams { k: self.k.unwrap_or(DEFAULT_K) },
            significance: SignificanceParams {
                resamples: self.resamples.unwrap_or(DEFAULT_RESAMPLES),
                alpha: self.alpha.unwrap_or(DEFAULT_ALPHA),
                seed: self.seed()?,
            },
            tau: self.tau.unwrap_or(DEFAULT_TAU),
        };
        if opts.ordeval.k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        opts.significance.validate()?;
        crate::kano::validate_tau(opts.tau)?;
        Ok(opts)
    }

    pub fn predict_options(&self) -> Result<PredictOptions> {
        let defaults = TreeParams::default();
        let opts = PredictOptions {
            folds: self.folds.unwrap_or(DEFAULT_FOLDS),
            seed: self.seed()?,
            tree: TreeParams {
                min_leaf: self.min_leaf.unwrap_or(defaults.min_leaf),
                max_depth: self.max_depth.or(defaults.max_depth),
                ..defaults
            },
        };
        if opts.folds < 2 {
            return Err(Error::InvalidParams("folds must be at least 2".into()));
        }
        if opts.tree.min_leaf == 0 {
            return Err(Error::InvalidParams("min-leaf must be at least 1".into()));
        }
        Ok(opts)
    }
}

impl InputArgs {
    fn to_config(&self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        Ok(base.overlay(RunConfig {
            input: self.input.clone(),
            response: self.response.clone(),
            id_column: self.id_column.clone(),
            default_scale: self.default_scale,
            scales: self.scales.iter().cloned().collect(),
            ..RunConfig::default()
        }))
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("cannot create {}: {e}", dir.display())))
}

fn load(cfg: &RunConfig) -> Result<OrdinalDataset> {
    parse_dataset(&read(cfg.input()?)?, &cfg.schema()?)
}

/// File name for the plot of attribute `index`: position plus a sanitized name.
pub fn attribute_plot_name(index: usize, name: &str) -> String {
    let clean: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    format!("attribute_{:02}_{clean}.svg", index + 1)
}

/// Prints the diagnostics; returns the exit code.
pub fn run_validate(cfg: &RunConfig) -> Result<i32> {
    let summary = validate_csv(&read(cfg.input()?)?, &cfg.schema()?)?;
    print!("{summary}");
    Ok(if summary.is_clean() { 0 } else { 2 })
}

/// Writes `report.json`, `summary.svg` and one SVG per attribute.
pub fn run_evaluate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let opts = cfg.evaluate_options()?;
    let ds = load(cfg)?;
    let report = evaluate(&ds, &opts)?;
    let palette = if cfg.colorblind.unwrap_or(false) { Palette::ColorBlind } else { Palette::Standard };
    let out = cfg.output();
    ensure_dir(&out)?;
    let mut written = Vec::new();
    let mut emit = |name: String, text: &str| -> Result<()> {
        let p = out.join(name);
        write(&p, text)?;
        written.push(p);
        Ok(())
    };
    emit("report.json".into(), &report.to_json())?;
    emit("summary.svg".into(), &render_summary_plot(&report, palette))?;
    for (i, a) in report.attributes.iter().enumerate() {
        emit(attribute_plot_name(i, &a.name), &render_attribute_plot(&report, &a.name, palette)?)?;
    }
    for a in &report.attributes {
        let u = a.up_aggregate.factor.map_or("n/a".into(), |x| format!("{x:.3}"));
        let d = a.down_aggregate.factor.map_or("n/a".into(), |x| format!("{x:.3}"));
        println!("{:<24} U={u:<6} D={d:<6} {}", a.name, a.label);
    }
    Ok(written)
}

/// Writes `cv_report.json` and `ranking.json`.
pub fn run_predict(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let opts = cfg.predict_options()?;
    let ds = load(cfg)?;
    let outcome = predict(&ds, &opts)?;
    let out = cfg.output();
    ensure_dir(&out)?;
    let cv_path = out.join("cv_report.json");
    let rank_path = out.join("ranking.json");
    write(&cv_path, &to_canonical_json(&outcome.summary))?;
    write(&rank_path, &to_canonical_json(&outcome.ranking))?;
    for r in [&outcome.summary.naive_bayes, &outcome.summary.decision_tree] {
        println!(
            "{:<14} exact {:.3}  within-one {:.3}  majority baseline {:.3}",
            r.learner, r.exact_accuracy, r.within_one_accuracy, r.majority_baseline
        );
    }
    println!(
        "ranked {} unlabeled rows with {}",
        outcome.ranking.units.len(),
        outcome.summary.selected_learner
    );
    Ok(vec![cv_path, rank_path])
}

pub fn run_synthesize(args: &SynthesizeArgs) -> Result<()> {
    let spec: SyntheticSpec = serde_json::from_str(&read(&args.spec)?)
        .map_err(|e| Error::InvalidSpec(format!("{}: {e}", args.spec.display())))?;
    let ds = generate_synthetic(&spec, args.seed)?;
    let n = ds.n();
    let rows: Vec<Row> = ds
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| Row {
            response: if i + args.unlabeled >= n { None } else { r.response },
            ..r.clone()
        })
        .collect();
    let ds = ds.with_rows(rows)?.with_id_column(args.id_column.clone())?;
    write(&args.output, &ds.to_csv())
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate(a) => run_validate(&a.to_config()?),
        Command::Evaluate(a) => {
            let cfg = a.input.to_config()?.overlay(RunConfig {
                k: a.k,
                resamples: a.resamples,
                alpha: a.alpha,
                tau: a.tau,
                seed: a.seed,
                output: a.output,
                colorblind: a.colorblind.then_some(true),
                ..RunConfig::default()
            });
            run_evaluate(&cfg).map(|_| 0)
        }
        Command::Predict(a) => {
            let cfg = a.input.to_config()?.overlay(RunConfig {
                seed: a.seed,
                folds: a.folds,
                min_leaf: a.min_leaf,
                max_depth: a.max_depth,
                output: a.output,
                ..RunConfig::default()
            });
            run_predict(&cfg).map(|_| 0)
        }
        Command::Synthesize(a) => run_synthesize(&a).map(|_| 0),
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
