//! The versioned evaluation report and its canonical JSON form.
//!
//! Canonical form: object keys sorted, two-space indentation, every
//! floating-point field written with 17 significant digits in exponent
//! notation (`6.0000000000000000e-1`), integers as integers, trailing newline.
//! Writing, parsing and writing again yields identical bytes.

mod canonical;
mod svg;

pub use canonical::{to_canonical_json, write_canonical};
pub use svg::{render_attribute_plot, render_summary_plot, Palette, PX_PER_UNIT};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::dataset::{split_labeled, OrdinalDataset, Scale};
use crate::error::{Error, Result};
use crate::kano::{KanoLabel, KanoReport, ThresholdFinding};
use crate::ordeval::{FactorCell, OrdEvalParams, ReinforcementProfile};
use crate::predict::{CVReport, RankedPredictions};
use crate::significance::{CellNull, ConfidenceBox, NullDistribution, SignificanceFlags};

pub const SCHEMA_VERSION: &str = "ordeval-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnInfo {
    pub name: String,
    pub scale: Scale,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub n: usize,
    pub n_labeled: usize,
    pub n_unlabeled: usize,
    pub response: ColumnInfo,
    pub attributes: Vec<ColumnInfo>,
}

impl DatasetSummary {
    pub fn of(ds: &OrdinalDataset) -> Self {
        let (l, u) = split_labeled(ds);
        DatasetSummary {
            n: ds.n(),
            n_labeled: l.n(),
            n_unlabeled: u.n(),
            response: ColumnInfo { name: ds.response_name().to_owned(), scale: ds.response_scale() },
            attributes: ds
                .attribute_names()
                .iter()
                .zip(ds.scales())
                .map(|(name, &scale)| ColumnInfo { name: name.clone(), scale })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub k: usize,
    pub effective_k: usize,
    pub resamples: usize,
    pub alpha: f64,
    pub tau: f64,
    pub seed: u64,
}

/// One reinforcement factor with its null box and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    /// `null` when no pair supports the cell.
    pub factor: Option<f64>,
    pub pair_count: u64,
    pub successes: u64,
    pub null_box: Option<ConfidenceBox>,
    pub unassessable: bool,
    pub significant: bool,
}

impl CellReport {
    fn new(cell: FactorCell, null: &CellNull, significant: bool) -> Self {
        CellReport {
            factor: cell.probability(),
            pair_count: cell.pair_count,
            successes: cell.successes,
            null_box: null.confidence,
            unassessable: null.unassessable,
            significant,
        }
    }

    pub fn is_defined(&self) -> bool {
        self.factor.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueReport {
    pub value: i32,
    pub up: CellReport,
    pub down: CellReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeReport {
    pub name: String,
    pub scale: Scale,
    pub label: KanoLabel,
    pub up_aggregate: CellReport,
    pub down_aggregate: CellReport,
    pub values: Vec<ValueReport>,
    pub thresholds: Vec<ThresholdFinding>,
}

impl AttributeReport {
    /// Value-level cells with a factor.
    pub fn defined_cells(&self) -> usize {
        self.values
            .iter()
            .map(|v| v.up.is_defined() as usize + v.down.is_defined() as usize)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub schema_version: String,
    pub dataset: DatasetSummary,
    pub params: ReportParams,
    pub attributes: Vec<AttributeReport>,
    pub cross_validation: Option<Vec<CVReport>>,
    pub ranking: Option<RankedPredictions>,
}

impl EvaluationReport {
    pub fn attribute(&self, name: &str) -> Option<&AttributeReport> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text)
    }
}

/// Everything computed from one dataset under one parameter set.
pub struct AnalysisProducts<'a> {
    pub dataset: &'a OrdinalDataset,
    pub ordeval: OrdEvalParams,
    pub profile: &'a ReinforcementProfile,
    pub null: &'a NullDistribution,
    pub flags: &'a SignificanceFlags,
    pub kano: &'a KanoReport,
    pub cross_validation: Option<Vec<CVReport>>,
    pub ranking: Option<RankedPredictions>,
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InconsistentProducts(what()))
    }
}

pub fn build_report(p: &AnalysisProducts<'_>) -> Result<EvaluationReport> {
    let names = p.dataset.attribute_names();
    let a = names.len();
    check(p.profile.attributes.len() == a, || "profile attribute count".into())?;
    check(p.null.attributes.len() == a, || "null distribution attribute count".into())?;
    check(p.flags.attributes.len() == a, || "flag attribute count".into())?;
    check(p.kano.attributes.len() == a, || "Kano report attribute count".into())?;

    let (labeled, _) = split_labeled(p.dataset);
    let mut attributes = Vec::with_capacity(a);
    for (i, name) in names.iter().enumerate() {
        let (prof, null, flags, kano) =
            (&p.profile.attributes[i], &p.null.attributes[i], &p.flags.attributes[i], &p.kano.attributes[i]);
        check(
            prof.name == *name && null.name == *name && kano.attribute == *name,
            || format!("attribute {i} is `{name}` in the dataset but differs in a product"),
        )?;
        let len = prof.scale.len();
        check(
            null.up.len() == len && null.down.len() == len && flags.up.len() == len && flags.down.len() == len,
            || format!("value count of `{name}`"),
        )?;
        let values = prof
            .scale
            .values()
            .enumerate()
            .map(|(o, value)| ValueReport {
                value,
                up: CellReport::new(prof.up[o], &null.up[o], flags.up[o]),
                down: CellReport::new(prof.down[o], &null.down[o], flags.down[o]),
            })
            .collect();
        attributes.push(AttributeReport {
            name: name.clone(),
            scale: prof.scale,
            label: kano.label,
            up_aggregate: CellReport::new(prof.up_aggregate(), &null.up_aggregate, flags.up_aggregate),
            down_aggregate: CellReport::new(prof.down_aggregate(), &null.down_aggregate, flags.down_aggregate),
            values,
            thresholds: kano.thresholds.clone(),
        });
    }
    Ok(EvaluationReport {
        schema_version: SCHEMA_VERSION.to_owned(),
        dataset: DatasetSummary::of(p.dataset),
        params: ReportParams {
            k: p.ordeval.k,
            effective_k: p.ordeval.effective_k(labeled.n()),
            resamples: p.null.params.resamples,
            alpha: p.null.params.alpha,
            tau: p.kano.tau,
            seed: p.null.params.seed,
        },
        attributes,
        cross_validation: p.cross_validation.clone(),
        ranking: p.ranking.clone(),
    })
}

/// Canonical JSON of the full report.
pub fn write_report(p: &AnalysisProducts<'_>) -> Result<String> {
    Ok(build_report(p)?.to_json())
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
}
