use serde::{Deserialize, Serialize};

use super::{Classifier, Learner, ResponseDistribution};
use crate::dataset::{Cell, OrdinalDataset, Scale};
use crate::error::{Error, Result};

/// Naive Bayes over categorical (ordinal) attributes with additive smoothing
/// of both the priors and the per-class value frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NBModel {
    pub response_scale: Scale,
    pub scales: Vec<Scale>,
    pub smoothing: f64,
    pub priors: Vec<f64>,
    /// `conditionals[attribute][class][value offset]`
    pub conditionals: Vec<Vec<Vec<f64>>>,
}

/// Laplace smoothing (pseudo-count 1).
pub fn train_naive_bayes(ds: &OrdinalDataset) -> Result<NBModel> {
    train_naive_bayes_with(ds, 1.0)
}

/// Rows without a response are ignored; a missing attribute value is left
/// out of that attribute's counts only.
pub fn train_naive_bayes_with(ds: &OrdinalDataset, smoothing: f64) -> Result<NBModel> {
    if !(smoothing > 0.0 && smoothing.is_finite()) {
        return Err(Error::InvalidParams(format!("smoothing must be positive, got {smoothing}")));
    }
    let rs = ds.response_scale();
    let k = rs.len();
    let mut class_counts = vec![0.0; k];
    let mut value_counts: Vec<Vec<Vec<f64>>> =
        ds.scales().iter().map(|s| vec![vec![0.0; s.len()]; k]).collect();
    for row in ds.rows() {
        let Some(c) = row.response else { continue };
        let c = rs.offset(c);
        class_counts[c] += 1.0;
        for (a, v) in row.values.iter().enumerate() {
            if let Some(v) = v {
                value_counts[a][c][ds.scales()[a].offset(*v)] += 1.0;
            }
        }
    }
    let n: f64 = class_counts.iter().sum();
    if n == 0.0 {
        return Err(Error::EmptyTrainingSet);
    }
    let priors = class_counts
        .iter()
        .map(|c| (c + smoothing) / (n + smoothing * k as f64))
        .collect();
    let conditionals = value_counts
        .into_iter()
        .map(|per_class| {
            per_class
                .into_iter()
                .map(|counts| {
                    let total: f64 = counts.iter().sum();
                    let denom = total + smoothing * counts.len() as f64;
                    counts.into_iter().map(|c| (c + smoothing) / denom).collect()
                })
                .collect()
        })
        .collect();
    Ok(NBModel { response_scale: rs, scales: ds.scales().to_vec(), smoothing, priors, conditionals })
}

/// Normalized posterior over response values. Missing cells are skipped.
pub fn predict_nb(model: &NBModel, row: &[Cell]) -> ResponseDistribution {
    let log_post: Vec<f64> = (0..model.priors.len())
        .map(|c| {
            let mut lp = model.priors[c].ln();
            for (a, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    let s = model.scales[a];
                    if s.contains(*v) {
                        lp += model.conditionals[a][c][s.offset(*v)].ln();
                    }
                }
            }
            lp
        })
        .collect();
    let m = log_post.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_post.iter().map(|lp| (lp - m).exp()).collect();
    ResponseDistribution::from_counts(model.response_scale, &w)
}

impl Classifier for NBModel {
    fn predict(&self, row: &[Cell]) -> ResponseDistribution {
        predict_nb(self, row)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NaiveBayesLearner {
    pub smoothing: f64,
}

impl Default for NaiveBayesLearner {
    fn default() -> Self {
        NaiveBayesLearner { smoothing: 1.0 }
    }
}

impl Learner for NaiveBayesLearner {
    fn name(&self) -> &str {
        "naive_bayes"
    }

    fn fit(&self, ds: &OrdinalDataset) -> Result<Box<dyn Classifier>> {
        Ok(Box::new(train_naive_bayes_with(ds, self.smoothing)?))
    }
}
