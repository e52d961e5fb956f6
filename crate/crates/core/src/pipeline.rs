//! End-to-end runs shared by the CLI and the C bindings.

use serde::{Deserialize, Serialize};

use crate::dataset::{split_labeled, OrdinalDataset};
use crate::error::{Error, Result};
use crate::kano::{kano_report, validate_tau, DEFAULT_TAU};
use crate::ordeval::{reinforcement_profile, OrdEvalParams};
use crate::predict::{
    cross_validate, rank_targets, CVReport, Learner, NaiveBayesLearner, RankedPredictions, TreeLearner,
    TreeParams, DEFAULT_FOLDS,
};
use crate::report::{build_report, AnalysisProducts, EvaluationReport};
use crate::significance::{null_distribution, significance_flags, SignificanceParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluateOptions {
    pub ordeval: OrdEvalParams,
    pub significance: SignificanceParams,
    pub tau: f64,
}

impl EvaluateOptions {
    pub fn new(seed: u64) -> Self {
        EvaluateOptions {
            ordeval: OrdEvalParams::default(),
            significance: SignificanceParams::new(seed),
            tau: DEFAULT_TAU,
        }
    }
}

/// Profile, null distribution, significance and Kano typing of the labeled
/// rows of `ds`, assembled into a report.
pub fn evaluate(ds: &OrdinalDataset, opts: &EvaluateOptions) -> Result<EvaluationReport> {
    opts.significance.validate()?;
    validate_tau(opts.tau)?;
    let (labeled, _) = split_labeled(ds);
    if labeled.n() < 2 {
        return Err(Error::TooFewRows { needed: 2, got: labeled.n() });
    }
    let profile = reinforcement_profile(&labeled, &opts.ordeval)?;
    let null = null_distribution(&labeled, &opts.ordeval, &opts.significance)?;
    let flags = significance_flags(&profile, &null)?;
    let kano = kano_report(&profile, &flags, opts.tau)?;
    build_report(&AnalysisProducts {
        dataset: ds,
        ordeval: opts.ordeval,
        profile: &profile,
        null: &null,
        flags: &flags,
        kano: &kano,
        cross_validation: None,
        ranking: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictOptions {
    pub folds: usize,
    pub seed: u64,
    pub tree: TreeParams,
}

impl PredictOptions {
    pub fn new(seed: u64) -> Self {
        PredictOptions { folds: DEFAULT_FOLDS, seed, tree: TreeParams::default() }
    }
}

pub const CV_SCHEMA_VERSION: &str = "ordeval-cv/1";

/// Contents of `cv_report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidationSummary {
    pub schema_version: String,
    pub naive_bayes: CVReport,
    pub decision_tree: CVReport,
    /// Learner with the higher within-one accuracy; naive Bayes on ties.
    pub selected_learner: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionOutcome {
    pub summary: CrossValidationSummary,
    pub ranking: RankedPredictions,
}

/// Cross-validates both learners on the labeled rows, then ranks the
/// unlabeled rows with the better one trained on all labeled rows.
pub fn predict(ds: &OrdinalDataset, opts: &PredictOptions) -> Result<PredictionOutcome> {
    let (labeled, unlabeled) = split_labeled(ds);
    if labeled.n() < opts.folds {
        return Err(Error::TooFewRows { needed: opts.folds, got: labeled.n() });
    }
    let nb = NaiveBayesLearner::default();
    let tree = TreeLearner { params: opts.tree };
    let nb_cv = cross_validate(&labeled, &nb, opts.folds, opts.seed)?;
    let tree_cv = cross_validate(&labeled, &tree, opts.folds, opts.seed)?;
    let chosen: &dyn Learner =
        if tree_cv.within_one_accuracy > nb_cv.within_one_accuracy { &tree } else { &nb };
    let model = chosen.fit(&labeled)?;
    let ranking = rank_targets(model.as_ref(), chosen.name(), &unlabeled);
    Ok(PredictionOutcome {
        summary: CrossValidationSummary {
            schema_version: CV_SCHEMA_VERSION.to_owned(),
            selected_learner: chosen.name().to_owned(),
            naive_bayes: nb_cv,
            decision_tree: tree_cv,
        },
        ranking,
    })
}
